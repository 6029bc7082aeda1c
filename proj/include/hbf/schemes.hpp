// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "hbf/baselines.hpp"
#include "hbf/channel.hpp"
#include "hbf/combiner.hpp"
#include "hbf/config.hpp"
#include "hbf/precoder.hpp"

namespace hbf {

enum class Scheme { kPca, kSomp, kDft, kDigital };

std::string to_string(Scheme scheme);
Scheme parse_scheme(const std::string& text);
std::vector<Scheme> all_schemes();

struct DesignOptions {
  int somp_oversampling = 2;  // steering grid points per antenna along each axis
  double noise_var = 1.0;
};

struct LinkDesign {
  HybridPrecoder precoder;
  HybridCombiner combiner;
};

/// Designs transmitter and receiver for one scheme on one realization.
///   pca     - PCA RF precoder, water-filled baseband; weighted-PCA RF combiner
///   somp    - SOMP over oversampled steering dictionaries at both ends
///   dft     - greedy selection from the DFT codebooks at both ends
///   digital - SVD precoder with water-filling and the MMSE combiner
/// Every hybrid scheme quantizes its RF phases per config.quant_bits and uses
/// the weighted-LS + equalization baseband combiner.
LinkDesign design_link(Scheme scheme, const ChannelRealization& channel, const ChannelSvd& svd,
                       const SystemConfig& config, double snr, const DesignOptions& options = {});

}  // namespace hbf
