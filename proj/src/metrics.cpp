// SPDX-License-Identifier: Apache-2.0

#include "hbf/metrics.hpp"

#include <cmath>

#include "hbf/linalg.hpp"

namespace hbf {

double LinkResult::ber_stderr() const {
  if (bits_simulated == 0) return 0.0;
  return std::sqrt(ber * (1.0 - ber) / static_cast<double>(bits_simulated));
}

namespace {

CMatrix active_columns(const CMatrix& w, const HybridPrecoder& precoder, int k) {
  std::vector<Eigen::Index> keep;
  for (int i = 0; i < precoder.n_streams(); ++i) {
    if (precoder.stream_active(k, i)) keep.push_back(i);
  }
  CMatrix out(w.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) out.col(j) = w.col(keep[j]);
  return out;
}

double subcarrier_se(const CMatrix& h, const CMatrix& f, const CMatrix& w, double snr,
                     double noise_var, double n_streams, int k) {
  if (w.cols() == 0 || snr == 0.0) return 0.0;
  const CMatrix rn = noise_var * (w.adjoint() * w);
  Eigen::LLT<CMatrix> llt(0.5 * (rn + rn.adjoint()));
  if (llt.info() != Eigen::Success) {
    throw NumericalError("spectral_efficiency: noise covariance R_n is singular at subcarrier " +
                         std::to_string(k));
  }
  const CMatrix g = w.adjoint() * h * f;
  // L^{-1} G G^H L^{-H} shares its eigenvalues with R_n^{-1} G G^H
  const CMatrix whitened = llt.matrixL().solve(g);
  return log2_det_identity_plus((snr / n_streams) * whitened * whitened.adjoint());
}

}  // namespace

double spectral_efficiency(const ChannelRealization& channel, const HybridPrecoder& precoder,
                           const MatrixStack& combiners, double snr, double noise_var) {
  if (!(noise_var > 0.0)) throw ConfigError("spectral_efficiency: noise variance must be positive");
  if (snr < 0.0) throw ConfigError("spectral_efficiency: snr must be non-negative");
  const int n_sub = channel.n_subcarriers();
  double total = 0.0;
  for (int k = 0; k < n_sub; ++k) {
    total += subcarrier_se(channel.freq_channels[k], precoder.effective(k),
                           active_columns(combiners[k], precoder, k), snr, noise_var,
                           precoder.n_streams(), k);
  }
  return total / n_sub;
}

double spectral_efficiency(const ChannelRealization& channel, const HybridPrecoder& precoder,
                           const HybridCombiner& combiner, double snr, double noise_var,
                           bool equalized) {
  MatrixStack w;
  w.reserve(combiner.n_subcarriers());
  for (int k = 0; k < combiner.n_subcarriers(); ++k) {
    w.push_back(equalized ? combiner.effective(k) : combiner.effective_pre_eq(k));
  }
  return spectral_efficiency(channel, precoder, w, snr, noise_var);
}

namespace {

constexpr double kLevels[4] = {-3.0, -1.0, 1.0, 3.0};
// Gray labels of the levels above: -3:00, -1:01, +1:11, +3:10
constexpr int kLevelOfBits[4] = {0, 1, 3, 2};  // index by (b_hi << 1) | b_lo
constexpr int kBitsOfLevel[4] = {0b00, 0b01, 0b11, 0b10};

int nearest_level(double x) {
  if (x < -2.0) return 0;
  if (x < 0.0) return 1;
  if (x < 2.0) return 2;
  return 3;
}

}  // namespace

std::vector<Complex> qam16_modulate(std::span<const std::uint8_t> bits) {
  if (bits.size() % 4 != 0) {
    throw ConfigError("qam16_modulate: bit count " + std::to_string(bits.size()) +
                      " is not a multiple of 4");
  }
  const double scale = 1.0 / std::sqrt(10.0);
  std::vector<Complex> out;
  out.reserve(bits.size() / 4);
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    const int re = kLevelOfBits[((bits[i] & 1) << 1) | (bits[i + 1] & 1)];
    const int im = kLevelOfBits[((bits[i + 2] & 1) << 1) | (bits[i + 3] & 1)];
    out.emplace_back(scale * kLevels[re], scale * kLevels[im]);
  }
  return out;
}

std::vector<std::uint8_t> qam16_demodulate(std::span<const Complex> symbols) {
  const double scale = std::sqrt(10.0);
  std::vector<std::uint8_t> out;
  out.reserve(symbols.size() * 4);
  for (const auto& s : symbols) {
    const int re = kBitsOfLevel[nearest_level(s.real() * scale)];
    const int im = kBitsOfLevel[nearest_level(s.imag() * scale)];
    out.push_back(static_cast<std::uint8_t>(re >> 1));
    out.push_back(static_cast<std::uint8_t>(re & 1));
    out.push_back(static_cast<std::uint8_t>(im >> 1));
    out.push_back(static_cast<std::uint8_t>(im & 1));
  }
  return out;
}

LinkResult simulate_ber(const ChannelRealization& channel, const HybridPrecoder& precoder,
                        const HybridCombiner& combiner, double snr, double noise_var,
                        const BerOptions& options, Rng& rng) {
  // Transmit power scales with noise_var, so the noiseless limit is snr -> inf.
  if (!(noise_var > 0.0)) throw ConfigError("simulate_ber: noise variance must be positive");
  const int n_sub = channel.n_subcarriers();
  const int ns = precoder.n_streams();
  const double amplitude = std::sqrt(snr * noise_var / ns);

  // Effective per-subcarrier link and combiner, computed once.
  MatrixStack link(n_sub);
  MatrixStack comb(n_sub);
  for (int k = 0; k < n_sub; ++k) {
    comb[k] = combiner.effective(k).adjoint();
    link[k] = channel.freq_channels[k] * precoder.effective(k);
  }

  LinkResult result;
  result.snr_db = 10.0 * std::log10(snr);
  std::vector<std::uint8_t> bits;
  std::vector<Complex> received;
  for (std::uint64_t frame = 0; frame < options.max_frames; ++frame) {
    if (frame >= options.min_frames && result.errors_counted >= options.target_errors) break;
    for (int k = 0; k < n_sub; ++k) {
      std::vector<int> active;
      for (int i = 0; i < ns; ++i) {
        if (precoder.stream_active(k, i)) active.push_back(i);
      }
      if (active.empty()) continue;
      bits.resize(4 * active.size());
      for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() >> 63);
      const auto symbols = qam16_modulate(bits);

      CVector x = CVector::Zero(ns);
      for (std::size_t j = 0; j < active.size(); ++j) x(active[j]) = amplitude * symbols[j];
      CVector y = link[k] * x;
      for (Eigen::Index r = 0; r < y.size(); ++r) y(r) += rng.complex_normal(noise_var);
      const CVector z = comb[k] * y;

      received.clear();
      for (const int i : active) received.push_back(amplitude > 0.0 ? z(i) / amplitude : z(i));
      const auto detected = qam16_demodulate(received);
      for (std::size_t b = 0; b < bits.size(); ++b) result.errors_counted += (bits[b] != detected[b]);
      result.bits_simulated += bits.size();
    }
  }
  result.ber = result.bits_simulated == 0
                   ? 0.0
                   : static_cast<double>(result.errors_counted) / result.bits_simulated;
  return result;
}

}  // namespace hbf
