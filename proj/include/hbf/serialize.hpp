// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include <json.hpp>

#include "hbf/channel.hpp"
#include "hbf/combiner.hpp"
#include "hbf/precoder.hpp"

namespace hbf {

/// Row-major nested arrays of [re, im] pairs.
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json stack_to_json(const MatrixStack& stack);
MatrixStack stack_from_json(const nlohmann::json& j);

/// {"n_rx", "n_tx", "delay_taps", "freq_channels", "paths"}
nlohmann::json channel_to_json(const ChannelRealization& channel);
ChannelRealization channel_from_json(const nlohmann::json& j);

nlohmann::json precoder_to_json(const HybridPrecoder& precoder);
nlohmann::json combiner_to_json(const HybridCombiner& combiner);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

}  // namespace hbf
