// SPDX-License-Identifier: Apache-2.0

#include "hbf/precoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hbf/linalg.hpp"

namespace hbf {

MatrixStack optimal_precoders(const ChannelSvd& svd, int n_streams) {
  MatrixStack out;
  out.reserve(svd.size());
  for (std::size_t k = 0; k < svd.size(); ++k) {
    const auto& v = svd[k].v;
    if (n_streams < 1 || n_streams > v.cols()) {
      throw ConfigError("optimal_precoders: " + std::to_string(n_streams) +
                        " streams requested but only " + std::to_string(v.cols()) +
                        " singular vectors available");
    }
    out.push_back(v.leftCols(n_streams));
  }
  return out;
}

PrecoderStack precoder_stack(const ChannelSvd& svd, int n_streams) {
  PrecoderStack s;
  s.optimal = optimal_precoders(svd, n_streams);
  s.concatenation = hconcat(s.optimal);
  return s;
}

CMatrix pca_rf_precoder(const PrecoderStack& stack, int n_rf) {
  const auto n_antennas = stack.concatenation.rows();
  if (n_rf < 1 || n_rf > n_antennas) {
    throw ConfigError("pca_rf_precoder: n_rf must lie in [1, N_t]");
  }
  return constant_modulus_projection(principal_left_basis(stack.concatenation, n_rf));
}

WaterFilling water_filling(const RMatrix& gains, double budget) {
  const double n_streams = static_cast<double>(gains.cols());
  struct Entry {
    double inverse;
    Eigen::Index flat;
  };
  std::vector<Entry> entries;
  for (Eigen::Index i = 0; i < gains.size(); ++i) {
    const double g = gains.data()[i];
    if (!(g >= 0.0) || !std::isfinite(g)) throw NumericalError("water_filling: invalid gain");
    if (g > 0.0) entries.push_back({n_streams / (g * g), i});
  }
  if (entries.empty()) throw NumericalError("water_filling: all gains are zero");
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.inverse < b.inverse; });

  // Largest active set whose waterline clears its weakest member.
  double prefix = 0.0;
  double level = budget + entries.front().inverse;
  for (std::size_t m = 1; m <= entries.size(); ++m) {
    prefix += entries[m - 1].inverse;
    const double candidate = (budget + prefix) / static_cast<double>(m);
    if (candidate > entries[m - 1].inverse) level = candidate;
    else break;
  }

  WaterFilling out;
  out.level = level;
  out.allocations = RMatrix::Zero(gains.rows(), gains.cols());
  for (const auto& e : entries) out.allocations.data()[e.flat] = std::max(level - e.inverse, 0.0);
  return out;
}

HybridPrecoder baseband_precoders(const CMatrix& rf, const ChannelSvd& svd, int n_streams,
                                  double snr) {
  if (!(snr > 0.0)) throw ConfigError("baseband_precoders: snr must be positive");
  const int n_sub = static_cast<int>(svd.size());
  CMatrix gram_inv_sqrt;
  try {
    gram_inv_sqrt = hermitian_inv_sqrt(rf.adjoint() * rf);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("baseband_precoders: RF precoder ") + e.what());
  }
  const CMatrix rf_orth = rf * gram_inv_sqrt;

  RMatrix gains(n_sub, n_streams);
  MatrixStack directions(n_sub);
  for (int k = 0; k < n_sub; ++k) {
    const auto& f = svd[k];
    const CMatrix equivalent = f.s.cast<Complex>().asDiagonal() * (f.v.adjoint() * rf_orth);
    const Svd eq = thin_svd(equivalent);
    if (eq.s.size() < n_streams) {
      throw ConfigError("baseband_precoders: equivalent channel supports only " +
                        std::to_string(eq.s.size()) + " streams");
    }
    gains.row(k) = std::sqrt(snr) * eq.s.head(n_streams).transpose();
    directions[k] = eq.v.leftCols(n_streams);
  }

  const auto wf = water_filling(gains, static_cast<double>(n_sub) * n_streams);

  HybridPrecoder out;
  out.rf = rf;
  out.water_level = wf.level;
  out.allocations = wf.allocations;
  out.baseband.reserve(n_sub);
  for (int k = 0; k < n_sub; ++k) {
    const RVector amp = wf.allocations.row(k).transpose().cwiseSqrt();
    out.baseband.push_back(gram_inv_sqrt * directions[k] * amp.cast<Complex>().asDiagonal());
  }
  return out;
}

CMatrix quantize_phases(const CMatrix& m, const PhaseResolution& resolution) {
  if (!resolution.is_quantized()) return m;
  const int levels = 1 << resolution.bit_count();
  const double step = 2.0 * kPi / levels;
  CMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    double phase = phase_of(z);
    if (phase < 0.0) phase += 2.0 * kPi;
    int best = 0;
    double best_dist = 4.0 * kPi;
    for (int q = 0; q < levels; ++q) {
      double d = std::fabs(phase - q * step);
      d = std::min(d, 2.0 * kPi - d);
      // strict improvement beyond rounding keeps the smaller index on ties
      if (d < best_dist - 1e-12) {
        best_dist = d;
        best = q;
      }
    }
    out.data()[i] = std::polar(std::abs(z), best * step);
  }
  return out;
}

double transmit_power(const HybridPrecoder& precoder) {
  double total = 0.0;
  for (int k = 0; k < precoder.n_subcarriers(); ++k) total += precoder.effective(k).squaredNorm();
  return total;
}

HybridPrecoder design_pca_precoder(const ChannelSvd& svd, const SystemConfig& config, double snr) {
  const auto stack = precoder_stack(svd, config.n_streams);
  const CMatrix rf = quantize_phases(pca_rf_precoder(stack, config.n_rf_tx), config.quant_bits);
  return baseband_precoders(rf, svd, config.n_streams, snr);
}

}  // namespace hbf
