// SPDX-License-Identifier: Apache-2.0

#include "hbf/combiner.hpp"

#include <cmath>

#include "hbf/linalg.hpp"

namespace hbf {

namespace {

void require_noise(double noise_var) {
  if (!(noise_var > 0.0)) throw ConfigError("noise variance must be positive");
}

}  // namespace

ReceivedCovariance received_covariance(const ChannelRealization& channel,
                                       const HybridPrecoder& precoder, double snr,
                                       double noise_var, int k) {
  require_noise(noise_var);
  const double ns = precoder.n_streams();
  const CMatrix hf = channel.freq_channels[k] * precoder.effective(k);
  CMatrix cov = (snr / ns) * hf * hf.adjoint();
  cov.diagonal().array() += noise_var;
  cov = 0.5 * (cov + cov.adjoint()).eval();
  ReceivedCovariance out;
  out.root = hermitian_sqrt(cov);
  out.covariance = std::move(cov);
  return out;
}

MatrixStack mmse_combiners(const ChannelRealization& channel, const HybridPrecoder& precoder,
                           double snr, double noise_var) {
  require_noise(noise_var);
  const double ns = precoder.n_streams();
  MatrixStack out;
  out.reserve(channel.freq_channels.size());
  for (int k = 0; k < channel.n_subcarriers(); ++k) {
    const CMatrix hf = channel.freq_channels[k] * precoder.effective(k);
    CMatrix cov = (snr / ns) * hf * hf.adjoint();
    cov.diagonal().array() += noise_var;
    Eigen::LLT<CMatrix> llt(cov);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("mmse_combiners: covariance not positive definite at subcarrier " +
                           std::to_string(k));
    }
    out.push_back(llt.solve((std::sqrt(snr) / ns) * hf));
  }
  return out;
}

CMatrix weighted_concatenation(const MatrixStack& w_opt, const MatrixStack& cov_roots) {
  MatrixStack weighted;
  weighted.reserve(w_opt.size());
  for (std::size_t k = 0; k < w_opt.size(); ++k) weighted.push_back(cov_roots[k] * w_opt[k]);
  return hconcat(weighted);
}

CMatrix wpca_rf_combiner(const MatrixStack& w_opt, const MatrixStack& cov_roots, int n_rf) {
  if (w_opt.size() != cov_roots.size() || w_opt.empty()) {
    throw ConfigError("wpca_rf_combiner: need one covariance root per subcarrier");
  }
  const CMatrix weighted = weighted_concatenation(w_opt, cov_roots);
  if (n_rf < 1 || n_rf > weighted.rows()) {
    throw ConfigError("wpca_rf_combiner: n_rf must lie in [1, N_r]");
  }
  return constant_modulus_projection(principal_left_basis(weighted, n_rf));
}

BasebandCombiners baseband_combiners(const CMatrix& rf, const MatrixStack& w_opt,
                                     const MatrixStack& covariances,
                                     const ChannelRealization& channel,
                                     const HybridPrecoder& precoder) {
  BasebandCombiners out;
  const int n_sub = static_cast<int>(w_opt.size());
  out.pre_eq.reserve(n_sub);
  out.equalized.reserve(n_sub);
  for (int k = 0; k < n_sub; ++k) {
    const CMatrix weighted_rf = covariances[k] * rf;
    const CMatrix normal = rf.adjoint() * weighted_rf;
    Eigen::FullPivLU<CMatrix> lu(normal);
    if (!lu.isInvertible()) {
      throw NumericalError("baseband_combiners: W_RF^H E W_RF is singular at subcarrier " +
                           std::to_string(k));
    }
    CMatrix pre = lu.solve(weighted_rf.adjoint() * w_opt[k]);

    // W_BB enters the link as W_BB^H, so each column is scaled by 1/conj(d)
    // to make the effective gain d exactly one.
    const CMatrix gain = (rf * pre).adjoint() * channel.freq_channels[k] * precoder.effective(k);
    CMatrix eq = pre;
    for (Eigen::Index i = 0; i < pre.cols(); ++i) {
      if (!precoder.stream_active(k, static_cast<int>(i))) {
        eq.col(i).setZero();
        continue;
      }
      const Complex d = gain(i, i);
      if (std::abs(d) <= 1e-300 || !std::isfinite(std::abs(d))) {
        throw NumericalError("baseband_combiners: zero effective gain on stream " +
                             std::to_string(i) + " at subcarrier " + std::to_string(k));
      }
      eq.col(i) /= std::conj(d);
    }
    out.pre_eq.push_back(std::move(pre));
    out.equalized.push_back(std::move(eq));
  }
  return out;
}

double combiner_mse(const MatrixStack& combiners, const ChannelRealization& channel,
                    const HybridPrecoder& precoder, double snr, double noise_var) {
  const double ns = precoder.n_streams();
  double total = 0.0;
  for (int k = 0; k < channel.n_subcarriers(); ++k) {
    const CMatrix hf = channel.freq_channels[k] * precoder.effective(k);
    CMatrix cov = (snr / ns) * hf * hf.adjoint();
    cov.diagonal().array() += noise_var;
    const CMatrix cross = (std::sqrt(snr) / ns) * hf.adjoint();  // E[s y^H]
    const CMatrix& w = combiners[k];
    total += 1.0 - 2.0 * (cross * w).trace().real() +
             (w.adjoint() * cov * w).trace().real();
  }
  return total;
}

HybridCombiner complete_combiner(CMatrix rf, const ChannelRealization& channel,
                                 const HybridPrecoder& precoder, MatrixStack w_opt, MatrixStack covariances, MatrixStack roots) {
  auto bb = baseband_combiners(rf, w_opt, covariances, channel, precoder);
  HybridCombiner out;
  out.rf = std::move(rf);
  out.baseband = std::move(bb.equalized);
  out.baseband_pre_eq = std::move(bb.pre_eq);
  out.mmse_reference = std::move(w_opt);
  out.covariances = std::move(covariances);
  out.covariance_roots = std::move(roots);
  return out;
}

HybridCombiner design_wpca_combiner(const ChannelRealization& channel,
                                    const HybridPrecoder& precoder, const SystemConfig& config,
                                    double snr, double noise_var) {
  MatrixStack covariances;
  MatrixStack roots;
  for (int k = 0; k < channel.n_subcarriers(); ++k) {
    auto rc = received_covariance(channel, precoder, snr, noise_var, k);
    covariances.push_back(std::move(rc.covariance));
    roots.push_back(std::move(rc.root));
  }
  MatrixStack w_opt = mmse_combiners(channel, precoder, snr, noise_var);
  CMatrix rf = quantize_phases(wpca_rf_combiner(w_opt, roots, config.n_rf_rx), config.quant_bits);
  return complete_combiner(std::move(rf), channel, precoder, std::move(w_opt),
                           std::move(covariances), std::move(roots));
}

}  // namespace hbf
