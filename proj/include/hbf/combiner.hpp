// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hbf/channel.hpp"
#include "hbf/config.hpp"
#include "hbf/precoder.hpp"
#include "hbf/types.hpp"

namespace hbf {

struct HybridCombiner {
  CMatrix rf;                    // N_r x N_r^RF
  MatrixStack baseband;          // K matrices N_r^RF x N_s, equalized
  MatrixStack baseband_pre_eq;   // weighted-LS solution before equalization
  MatrixStack mmse_reference;    // W_opt[k], N_r x N_s
  MatrixStack covariances;       // E[y y^H] per subcarrier
  MatrixStack covariance_roots;  // principal square roots

  int n_subcarriers() const { return static_cast<int>(baseband.size()); }
  CMatrix effective(int k) const { return rf * baseband[k]; }
  CMatrix effective_pre_eq(int k) const { return rf * baseband_pre_eq[k]; }
};

struct ReceivedCovariance {
  CMatrix covariance;
  CMatrix root;
};

/// E[y y^H] = (snr / N_s) H F F^H H^H + noise_var I and its principal root.
ReceivedCovariance received_covariance(const ChannelRealization& channel,
                                       const HybridPrecoder& precoder, double snr,
                                       double noise_var, int k);

/// W_opt[k] = (sqrt(snr) / N_s) E[y y^H]^{-1} H[k] F_RF F_BB[k].
MatrixStack mmse_combiners(const ChannelRealization& channel, const HybridPrecoder& precoder,
                           double snr, double noise_var = 1.0);

/// [E_0^{1/2} W_opt[0] ... E_{K-1}^{1/2} W_opt[K-1]]
CMatrix weighted_concatenation(const MatrixStack& w_opt, const MatrixStack& cov_roots);

/// Weighted PCA RF combiner: phases of the n_rf principal left singular
/// vectors of the weighted concatenation, modulus 1/sqrt(N_r).
CMatrix wpca_rf_combiner(const MatrixStack& w_opt, const MatrixStack& cov_roots, int n_rf);

struct BasebandCombiners {
  MatrixStack pre_eq;
  MatrixStack equalized;
};

/// Weighted LS fit of W_opt[k] through W_RF, then per-stream equalization so
/// that diag(W^H H F) = 1 on every active stream. Streams with no allocated
/// power keep a zero column.
BasebandCombiners baseband_combiners(const CMatrix& rf, const MatrixStack& w_opt,
                                     const MatrixStack& covariances,
                                     const ChannelRealization& channel,
                                     const HybridPrecoder& precoder);

/// Sum over k of E||s - W^H y||^2 for combiners W[k] under the model that
/// W_opt is the Wiener solution of: y = sqrt(snr) H F s + n, E[s s^H] = I / N_s.
double combiner_mse(const MatrixStack& combiners, const ChannelRealization& channel,
                    const HybridPrecoder& precoder, double snr, double noise_var = 1.0);

/// Covariances, MMSE reference, weighted-PCA RF stage (quantized per config)
/// and equalized baseband stage.
HybridCombiner design_wpca_combiner(const ChannelRealization& channel,
                                    const HybridPrecoder& precoder, const SystemConfig& config,
                                    double snr, double noise_var = 1.0);

/// Shared tail of every combiner design once the RF stage is fixed.
HybridCombiner complete_combiner(CMatrix rf, const ChannelRealization& channel,
                                 const HybridPrecoder& precoder, MatrixStack w_opt, MatrixStack covariances, MatrixStack roots);

}  // namespace hbf
