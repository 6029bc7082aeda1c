// SPDX-License-Identifier: Apache-2.0

#include "hbf/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace hbf {

CVector steering_vector(double azimuth, double elevation, const ArrayGeometry& geometry) {
  const int n = geometry.size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double u = geometry.spacing_horizontal * std::sin(elevation) * std::cos(azimuth);
  const double v = geometry.spacing_vertical * std::sin(azimuth);
  CVector a(n);
  for (int m = 0; m < geometry.n_horizontal; ++m) {
    for (int q = 0; q < geometry.n_vertical; ++q) {
      a(m * geometry.n_vertical + q) = std::polar(scale, -2.0 * kPi * (m * u + q * v));
    }
  }
  return a;
}

std::vector<PathParameters> draw_paths(const ClusterConfig& cluster, int max_delay, Rng& rng) {
  validate(cluster);
  const double half = kPi / 2.0;
  const double spread = cluster.angle_spread;
  std::vector<PathParameters> paths;
  paths.reserve(static_cast<std::size_t>(cluster.n_clusters) * cluster.n_rays);
  for (int i = 0; i < cluster.n_clusters; ++i) {
    const double aod_az = rng.uniform(-half, half);
    const double aod_el = rng.uniform(-half, half);
    const double aoa_az = rng.uniform(-half, half);
    const double aoa_el = rng.uniform(-half, half);
    const double cluster_delay = rng.uniform(0.0, max_delay);
    for (int l = 0; l < cluster.n_rays; ++l) {
      PathParameters p;
      p.cluster_index = i;
      p.ray_index = l;
      p.aod_azimuth = aod_az + rng.uniform(-spread, spread);
      p.aod_elevation = aod_el + rng.uniform(-spread, spread);
      p.aoa_azimuth = aoa_az + rng.uniform(-spread, spread);
      p.aoa_elevation = aoa_el + rng.uniform(-spread, spread);
      p.delay = cluster.per_ray_delay ? rng.uniform(0.0, max_delay) : cluster_delay;
      p.gain = rng.complex_normal(1.0);
      paths.push_back(p);
    }
  }
  return paths;
}

MatrixStack frequency_response(const MatrixStack& delay_taps, int n_subcarriers) {
  if (delay_taps.empty()) throw ConfigError("frequency_response: no delay taps");
  const auto rows = delay_taps.front().rows();
  const auto cols = delay_taps.front().cols();
  std::vector<int> support;
  for (std::size_t d = 0; d < delay_taps.size(); ++d) {
    if (!delay_taps[d].isZero(0.0)) support.push_back(static_cast<int>(d));
  }
  MatrixStack out(n_subcarriers, CMatrix::Zero(rows, cols));
  for (int k = 0; k < n_subcarriers; ++k) {
    for (const int d : support) {
      // reduce k*d mod K first so the phase argument stays small
      const long long lag = (static_cast<long long>(k) * d) % n_subcarriers;
      const double phase = -2.0 * kPi * static_cast<double>(lag) / n_subcarriers;
      out[k] += delay_taps[d] * std::polar(1.0, phase);
    }
  }
  return out;
}

ChannelRealization build_channel(std::vector<PathParameters> paths, const SystemConfig& config) {
  validate(config);
  if (paths.empty()) throw ConfigError("build_channel: no paths");
  const int nt = config.n_tx();
  const int nr = config.n_rx();
  const int taps = config.max_delay;
  const double norm = std::sqrt(static_cast<double>(nt) * nr / static_cast<double>(paths.size()));

  ChannelRealization out;
  out.delay_taps.assign(taps, CMatrix::Zero(nr, nt));
  for (const auto& p : paths) {
    if (!(p.delay >= 0.0) || p.delay > taps) {
      throw ConfigError("build_channel: path delay " + std::to_string(p.delay) +
                        " outside [0, " + std::to_string(taps) + "]");
    }
    const int tap = std::clamp(static_cast<int>(std::lround(p.delay)), 0, taps - 1);
    const CVector ar = steering_vector(p.aoa_azimuth, p.aoa_elevation, config.rx_array);
    const CVector at = steering_vector(p.aod_azimuth, p.aod_elevation, config.tx_array);
    out.delay_taps[tap] += (norm * p.gain) * ar * at.adjoint();
  }
  out.freq_channels = frequency_response(out.delay_taps, config.n_subcarriers);
  out.paths = std::move(paths);
  return out;
}

ChannelSvd channel_svd(const ChannelRealization& realization) {
  ChannelSvd out;
  out.per_subcarrier.reserve(realization.freq_channels.size());
  for (std::size_t k = 0; k < realization.freq_channels.size(); ++k) {
    try {
      out.per_subcarrier.push_back(thin_svd(realization.freq_channels[k]));
    } catch (const NumericalError& e) {
      throw NumericalError("channel svd at subcarrier " + std::to_string(k) + ": " + e.what());
    }
  }
  return out;
}

ChannelRealization generate_channel(const SystemConfig& config, const ClusterConfig& cluster,
                                    std::uint64_t trial) {
  Rng rng = Rng::substream(config.seed, {0x6368616eULL, trial});
  return build_channel(draw_paths(cluster, config.max_delay, rng), config);
}

std::uint64_t ChannelRealization::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](double x) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &x, sizeof(double));
    for (const unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& m : freq_channels) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      feed(m.data()[i].real());
      feed(m.data()[i].imag());
    }
  }
  return h;
}

}  // namespace hbf
