// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "hbf/config.hpp"
#include "hbf/linalg.hpp"
#include "hbf/rng.hpp"
#include "hbf/types.hpp"

namespace hbf {

struct PathParameters {
  int cluster_index = 0;
  int ray_index = 0;
  Complex gain{1.0, 0.0};
  double delay = 0.0;  // tap units
  double aod_azimuth = 0.0;
  double aod_elevation = 0.0;
  double aoa_azimuth = 0.0;
  double aoa_elevation = 0.0;
};

struct ChannelRealization {
  MatrixStack delay_taps;     // D matrices, N_r x N_t
  MatrixStack freq_channels;  // K matrices, N_r x N_t
  std::vector<PathParameters> paths;

  int n_subcarriers() const { return static_cast<int>(freq_channels.size()); }
  int n_rx() const { return static_cast<int>(freq_channels.front().rows()); }
  int n_tx() const { return static_cast<int>(freq_channels.front().cols()); }
  /// FNV-1a over the frequency-domain entries; identifies a realization.
  std::uint64_t fingerprint() const;
};

struct ChannelSvd {
  std::vector<Svd> per_subcarrier;

  const Svd& operator[](std::size_t k) const { return per_subcarrier[k]; }
  std::size_t size() const { return per_subcarrier.size(); }
};

/// UPA response. Element (m, n), m horizontal and n vertical, sits at index
/// m * n_vertical + n and has phase
///   -2 pi (m d_h sin(elevation) cos(azimuth) + n d_v sin(azimuth)).
CVector steering_vector(double azimuth, double elevation, const ArrayGeometry& geometry);

/// Clustered multipath draw: cluster centres uniform on [-pi/2, pi/2] for
/// each of the four angles, rays offset uniformly within +-angle_spread,
/// delay uniform on [0, max_delay], gains CN(0, 1).
std::vector<PathParameters> draw_paths(const ClusterConfig& cluster, int max_delay, Rng& rng);

/// Dirac pulse: each path lands on the nearest integer tap, clamped to
/// [0, D-1]. Gains are scaled by sqrt(N_t N_r / paths.size()).
ChannelRealization build_channel(std::vector<PathParameters> paths, const SystemConfig& config);

/// H[k] = sum_d taps[d] exp(-j 2 pi k d / K), k = 0 .. K-1.
MatrixStack frequency_response(const MatrixStack& delay_taps, int n_subcarriers);

ChannelSvd channel_svd(const ChannelRealization& realization);

/// draw_paths + build_channel on the trial substream of config.seed.
ChannelRealization generate_channel(const SystemConfig& config, const ClusterConfig& cluster,
                                    std::uint64_t trial);

}  // namespace hbf
