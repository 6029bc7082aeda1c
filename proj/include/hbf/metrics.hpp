// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hbf/channel.hpp"
#include "hbf/combiner.hpp"
#include "hbf/precoder.hpp"
#include "hbf/rng.hpp"
#include "hbf/types.hpp"

namespace hbf {

struct LinkResult {
  double se_bits_per_hz = 0.0;
  double ber = 0.0;
  std::uint64_t bits_simulated = 0;
  std::uint64_t errors_counted = 0;
  double snr_db = 0.0;
  std::string scheme;

  /// sqrt(p (1 - p) / n)
  double ber_stderr() const;
};

/// Average over subcarriers of
///   log2 det(I + (snr / N_s) R_n^{-1} W^H H F F^H H^H W),  R_n = noise_var W^H W,
/// with W = W_RF W_BB[k] and F = F_RF F_BB[k]. Streams without allocated
/// power are dropped from W first; they carry no signal.
double spectral_efficiency(const ChannelRealization& channel, const HybridPrecoder& precoder,
                           const HybridCombiner& combiner, double snr, double noise_var = 1.0,
                           bool equalized = true);

/// Same formula for explicit per-subcarrier combiners W[k] (N_r x N_s).
double spectral_efficiency(const ChannelRealization& channel, const HybridPrecoder& precoder,
                           const MatrixStack& combiners, double snr, double noise_var = 1.0);

/// Gray-mapped 16-QAM, unit average energy. Bits b0 b1 select the in-phase
/// level and b2 b3 the quadrature level with 00 -> -3, 01 -> -1, 11 -> +1,
/// 10 -> +3 (all over sqrt(10)).
std::vector<Complex> qam16_modulate(std::span<const std::uint8_t> bits);
/// Nearest-point hard decision.
std::vector<std::uint8_t> qam16_demodulate(std::span<const Complex> symbols);

struct BerOptions {
  std::uint64_t max_frames = 1000;
  std::uint64_t target_errors = 100;
  std::uint64_t min_frames = 1;
};

/// Uncoded OFDM transmission r[k] = W^H (H F x[k] + n[k]) with per-stream
/// hard detection. Each frame carries 4 bits per active stream per
/// subcarrier; E[x x^H] = (snr noise_var / N_s) I. Stops at target_errors
/// (after min_frames) or max_frames, whichever comes first.
LinkResult simulate_ber(const ChannelRealization& channel, const HybridPrecoder& precoder,
                        const HybridCombiner& combiner, double snr, double noise_var,
                        const BerOptions& options, Rng& rng);

}  // namespace hbf
