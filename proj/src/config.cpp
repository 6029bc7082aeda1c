// SPDX-License-Identifier: Apache-2.0

#include "hbf/config.hpp"

#include <cmath>
#include <sstream>

#include "hbf/types.hpp"

namespace hbf {

std::string PhaseResolution::to_string() const {
  return is_quantized() ? std::to_string(*bits_) : std::string("inf");
}

PhaseResolution PhaseResolution::parse(const std::string& text) {
  if (text == "inf" || text == "unquantized") return unquantized();
  std::size_t used = 0;
  int q = 0;
  try {
    q = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("quant_bits: expected 'inf' or a positive integer, got '" + text + "'");
  }
  if (used != text.size() || q < 1) {
    throw ConfigError("quant_bits: expected 'inf' or a positive integer, got '" + text + "'");
  }
  return bits(q);
}

double SystemConfig::snr_linear() const { return std::pow(10.0, snr_db / 10.0); }

SystemConfig paper_system_defaults() {
  SystemConfig c;
  c.tx_array = {8, 8, 0.5, 0.5};
  c.rx_array = {8, 8, 0.5, 0.5};
  c.n_rf_tx = 4;
  c.n_rf_rx = 4;
  c.n_streams = 3;
  c.n_subcarriers = 512;
  c.max_delay = 64;
  return c;
}

SystemConfig desk_system_defaults() { return SystemConfig{}; }

namespace {

void check_geometry(const ArrayGeometry& g, const std::string& name,
                    std::vector<std::string>& out) {
  if (g.n_vertical < 1 || g.n_horizontal < 1) {
    out.push_back(name + ": element counts must be positive");
  }
  if (!(g.spacing_vertical > 0.0) || !(g.spacing_horizontal > 0.0)) {
    out.push_back(name + ": spacings must be strictly positive");
  }
}

}  // namespace

std::vector<std::string> check(const SystemConfig& c) {
  std::vector<std::string> out;
  check_geometry(c.tx_array, "tx_array", out);
  check_geometry(c.rx_array, "rx_array", out);
  if (c.n_streams < 1) out.push_back("n_streams must be at least 1");
  if (c.n_streams > c.n_rf_tx) out.push_back("streams exceed RF chains (n_streams > n_rf_tx)");
  if (c.n_streams > c.n_rf_rx) out.push_back("streams exceed RF chains (n_streams > n_rf_rx)");
  if (c.n_rf_tx > c.n_tx()) out.push_back("n_rf_tx exceeds transmit antennas");
  if (c.n_rf_rx > c.n_rx()) out.push_back("n_rf_rx exceeds receive antennas");
  if (c.n_subcarriers < 1) out.push_back("n_subcarriers must be at least 1");
  if (c.max_delay < 1) out.push_back("max_delay must be at least 1");
  if (c.max_delay > c.n_subcarriers) out.push_back("delay spread exceeds subcarriers (max_delay > n_subcarriers)");
  if (!std::isfinite(c.snr_db) || !(c.snr_linear() > 0.0)) out.push_back("snr must map to a positive finite linear value");
  return out;
}

std::vector<std::string> check(const ClusterConfig& c) {
  std::vector<std::string> out;
  if (c.n_clusters < 1) out.push_back("n_clusters must be at least 1");
  if (c.n_rays < 1) out.push_back("n_rays must be at least 1");
  if (!(c.angle_spread >= 0.0)) out.push_back("angle_spread must be non-negative");
  if (!(c.symbol_period > 0.0)) out.push_back("symbol_period must be positive");
  return out;
}

namespace {

template <typename T>
const T& validate_impl(const T& config) {
  const auto problems = check(config);
  if (problems.empty()) return config;
  std::ostringstream msg;
  msg << "invalid configuration:";
  for (const auto& p : problems) msg << "\n  - " << p;
  throw ConfigError(msg.str());
}

}  // namespace

const SystemConfig& validate(const SystemConfig& config) { return validate_impl(config); }
const ClusterConfig& validate(const ClusterConfig& config) { return validate_impl(config); }

void to_json(nlohmann::json& j, const ArrayGeometry& g) {
  j = {{"n_vertical", g.n_vertical},
       {"n_horizontal", g.n_horizontal},
       {"spacing_vertical", g.spacing_vertical},
       {"spacing_horizontal", g.spacing_horizontal}};
}

void from_json(const nlohmann::json& j, ArrayGeometry& g) {
  const ArrayGeometry d;
  g.n_vertical = j.value("n_vertical", d.n_vertical);
  g.n_horizontal = j.value("n_horizontal", d.n_horizontal);
  g.spacing_vertical = j.value("spacing_vertical", d.spacing_vertical);
  g.spacing_horizontal = j.value("spacing_horizontal", d.spacing_horizontal);
}

void to_json(nlohmann::json& j, const PhaseResolution& q) {
  if (q.is_quantized()) {
    j = q.bit_count();
  } else {
    j = "inf";
  }
}

void from_json(const nlohmann::json& j, PhaseResolution& q) {
  if (j.is_null()) {
    q = PhaseResolution::unquantized();
  } else if (j.is_number_integer()) {
    q = PhaseResolution::parse(std::to_string(j.get<int>()));
  } else if (j.is_string()) {
    q = PhaseResolution::parse(j.get<std::string>());
  } else {
    throw ConfigError("quant_bits: expected integer, \"inf\" or null");
  }
}

void to_json(nlohmann::json& j, const SystemConfig& c) {
  j = {{"tx_array", c.tx_array},
       {"rx_array", c.rx_array},
       {"n_rf_tx", c.n_rf_tx},
       {"n_rf_rx", c.n_rf_rx},
       {"n_streams", c.n_streams},
       {"n_subcarriers", c.n_subcarriers},
       {"max_delay", c.max_delay},
       {"snr_db", c.snr_db},
       {"quant_bits", c.quant_bits},
       {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, SystemConfig& c) {
  const SystemConfig d;
  c.tx_array = j.value("tx_array", d.tx_array);
  c.rx_array = j.value("rx_array", d.rx_array);
  c.n_rf_tx = j.value("n_rf_tx", d.n_rf_tx);
  c.n_rf_rx = j.value("n_rf_rx", d.n_rf_rx);
  c.n_streams = j.value("n_streams", d.n_streams);
  c.n_subcarriers = j.value("n_subcarriers", d.n_subcarriers);
  c.max_delay = j.value("max_delay", d.max_delay);
  c.snr_db = j.value("snr_db", d.snr_db);
  c.quant_bits = d.quant_bits;
  if (j.contains("quant_bits")) from_json(j.at("quant_bits"), c.quant_bits);
  c.seed = j.value("seed", d.seed);
}

void to_json(nlohmann::json& j, const ClusterConfig& c) {
  j = {{"n_clusters", c.n_clusters},
       {"n_rays", c.n_rays},
       {"angle_spread", c.angle_spread},
       {"symbol_period", c.symbol_period},
       {"per_ray_delay", c.per_ray_delay}};
}

void from_json(const nlohmann::json& j, ClusterConfig& c) {
  const ClusterConfig d;
  c.n_clusters = j.value("n_clusters", d.n_clusters);
  c.n_rays = j.value("n_rays", d.n_rays);
  c.angle_spread = j.value("angle_spread", d.angle_spread);
  c.symbol_period = j.value("symbol_period", d.symbol_period);
  c.per_ray_delay = j.value("per_ray_delay", d.per_ray_delay);
}

}  // namespace hbf
