// SPDX-License-Identifier: Apache-2.0

#include "hbf/schemes.hpp"

namespace hbf {

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kPca: return "pca";
    case Scheme::kSomp: return "somp";
    case Scheme::kDft: return "dft";
    case Scheme::kDigital: return "digital";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& text) {
  for (const auto s : all_schemes()) {
    if (to_string(s) == text) return s;
  }
  throw ConfigError("unknown scheme '" + text + "' (expected pca, somp, dft or digital)");
}

std::vector<Scheme> all_schemes() {
  return {Scheme::kPca, Scheme::kSomp, Scheme::kDft, Scheme::kDigital};
}

namespace {

struct ReceiverInputs {
  MatrixStack w_opt;
  MatrixStack covariances;
  MatrixStack roots;
};

ReceiverInputs receiver_inputs(const ChannelRealization& channel, const HybridPrecoder& precoder,
                               double snr, double noise_var) {
  ReceiverInputs in;
  for (int k = 0; k < channel.n_subcarriers(); ++k) {
    auto rc = received_covariance(channel, precoder, snr, noise_var, k);
    in.covariances.push_back(std::move(rc.covariance));
    in.roots.push_back(std::move(rc.root));
  }
  in.w_opt = mmse_combiners(channel, precoder, snr, noise_var);
  return in;
}

HybridCombiner finish(CMatrix rf, const ChannelRealization& channel,
                      const HybridPrecoder& precoder, ReceiverInputs in) {
  return complete_combiner(std::move(rf), channel, precoder, std::move(in.w_opt),
                           std::move(in.covariances), std::move(in.roots));
}

// Greedy selection on the transmit side; the baseband is the LS fit onto the
// (possibly quantized) selected beams.
HybridPrecoder selection_precoder(const MatrixStack& f_opt, const Dictionary& dict,
                                  const SystemConfig& config) {
  SparseSelection sel = somp_select(f_opt, dict, config.n_rf_tx);
  if (config.quant_bits.is_quantized()) {
    sel.rf = quantize_phases(sel.rf, config.quant_bits);
    const auto qr = sel.rf.colPivHouseholderQr();
    for (std::size_t k = 0; k < f_opt.size(); ++k) sel.coefficients[k] = qr.solve(f_opt[k]);
  }
  return precoder_from_selection(sel, config.n_streams);
}

HybridCombiner selection_combiner(const ChannelRealization& channel,
                                  const HybridPrecoder& precoder, const Dictionary& dict,
                                  const SystemConfig& config, double snr, double noise_var) {
  auto in = receiver_inputs(channel, precoder, snr, noise_var);
  MatrixStack targets;
  for (std::size_t k = 0; k < in.w_opt.size(); ++k) targets.push_back(in.roots[k] * in.w_opt[k]);
  CMatrix rf = quantize_phases(somp_select(targets, dict, config.n_rf_rx).rf, config.quant_bits);
  return finish(std::move(rf), channel, precoder, std::move(in));
}

}  // namespace

LinkDesign design_link(Scheme scheme, const ChannelRealization& channel, const ChannelSvd& svd,
                       const SystemConfig& config, double snr, const DesignOptions& options) {
  const double nv = options.noise_var;
  LinkDesign out;
  switch (scheme) {
    case Scheme::kPca: {
      out.precoder = design_pca_precoder(svd, config, snr);
      out.combiner = design_wpca_combiner(channel, out.precoder, config, snr, nv);
      break;
    }
    case Scheme::kDigital: {
      out.precoder = baseband_precoders(CMatrix::Identity(config.n_tx(), config.n_tx()), svd,
                                        config.n_streams, snr);
      CMatrix rf = CMatrix::Identity(config.n_rx(), config.n_rx());
      out.combiner = finish(std::move(rf), channel, out.precoder,
                            receiver_inputs(channel, out.precoder, snr, nv));
      break;
    }
    case Scheme::kSomp: {
      const int os = options.somp_oversampling;
      const auto tx_dict = build_steering_dictionary(
          config.tx_array, os * config.tx_array.n_horizontal, os * config.tx_array.n_vertical);
      const auto rx_dict = build_steering_dictionary(
          config.rx_array, os * config.rx_array.n_horizontal, os * config.rx_array.n_vertical);
      out.precoder = selection_precoder(optimal_precoders(svd, config.n_streams), tx_dict, config);
      out.combiner = selection_combiner(channel, out.precoder, rx_dict, config, snr, nv);
      break;
    }
    case Scheme::kDft: {
      out.precoder = selection_precoder(optimal_precoders(svd, config.n_streams),
                                        dft_codebook(config.tx_array), config);
      out.combiner =
          selection_combiner(channel, out.precoder, dft_codebook(config.rx_array), config, snr, nv);
      break;
    }
  }
  return out;
}

}  // namespace hbf
