// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hbf/channel.hpp"
#include "hbf/config.hpp"
#include "hbf/types.hpp"

namespace hbf {

/// Frequency-flat RF stage plus per-subcarrier baseband stage.
struct HybridPrecoder {
  CMatrix rf;              // N_t x N_t^RF
  MatrixStack baseband;    // K matrices, N_t^RF x N_s
  double water_level = 0.0;
  RMatrix allocations;     // K x N_s per-stream transmit powers

  int n_subcarriers() const { return static_cast<int>(baseband.size()); }
  int n_streams() const { return static_cast<int>(allocations.cols()); }
  /// F_RF * F_BB[k]
  CMatrix effective(int k) const { return rf * baseband[k]; }
  /// Streams that carry power on subcarrier k.
  bool stream_active(int k, int stream) const { return allocations(k, stream) > 0.0; }
};

/// Optimal per-subcarrier precoders and their concatenation
/// F = [F_opt[0] ... F_opt[K-1]].
struct PrecoderStack {
  MatrixStack optimal;
  CMatrix concatenation;
};

struct WaterFilling {
  double level = 0.0;
  RMatrix allocations;  // same shape as the gain matrix
};

/// F_opt[k] = first n_streams right singular vectors of H[k].
MatrixStack optimal_precoders(const ChannelSvd& svd, int n_streams);

PrecoderStack precoder_stack(const ChannelSvd& svd, int n_streams);

/// PCA RF precoder: phases of the n_rf principal left singular vectors of
/// the concatenation, modulus 1/sqrt(N_t).
CMatrix pca_rf_precoder(const PrecoderStack& stack, int n_rf);

/// Allocations p = (level - n_streams / g^2)^+ with sum(p) = budget, where
/// n_streams is the number of columns of `gains`. The level is found by the
/// closed-form active-set search. Zero gains are never allocated.
WaterFilling water_filling(const RMatrix& gains, double budget);

/// Baseband precoders for a given RF precoder:
///   F_BB[k] = (F_RF^H F_RF)^{-1/2} Vt[k](:, 1:N_s) diag(sqrt(p[k]))
/// where Vt[k] are right singular vectors of Sigma[k] V[k]^H F_RF (F_RF^H F_RF)^{-1/2}
/// and p is the water-filling over sqrt(snr) times their singular values.
HybridPrecoder baseband_precoders(const CMatrix& rf, const ChannelSvd& svd, int n_streams,
                                  double snr);

/// Nearest point of the 2^Q phase grid on the circle for every entry;
/// ties go to the smaller grid index. Moduli are preserved.
CMatrix quantize_phases(const CMatrix& m, const PhaseResolution& resolution);

/// Sum_k ||F_RF F_BB[k]||_F^2
double transmit_power(const HybridPrecoder& precoder);

/// Full transmit design: PCA RF stage, phase quantization, water-filled baseband.
HybridPrecoder design_pca_precoder(const ChannelSvd& svd, const SystemConfig& config, double snr);

}  // namespace hbf
