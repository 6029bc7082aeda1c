// SPDX-License-Identifier: Apache-2.0

#include "hbf/serialize.hpp"

#include <fstream>

namespace hbf {

nlohmann::json matrix_to_json(const CMatrix& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("matrix: expected an array of rows");
  const auto n_rows = static_cast<Eigen::Index>(j.size());
  const auto n_cols = n_rows == 0 ? 0 : static_cast<Eigen::Index>(j.front().size());
  CMatrix m(n_rows, n_cols);
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_cols) {
      throw ConfigError("matrix: ragged row " + std::to_string(i));
    }
    for (Eigen::Index c = 0; c < n_cols; ++c) {
      const auto& e = row[c];
      if (!e.is_array() || e.size() != 2) throw ConfigError("matrix: entries must be [re, im]");
      m(i, c) = {e[0].get<double>(), e[1].get<double>()};
    }
  }
  return m;
}

nlohmann::json stack_to_json(const MatrixStack& stack) {
  auto out = nlohmann::json::array();
  for (const auto& m : stack) out.push_back(matrix_to_json(m));
  return out;
}

MatrixStack stack_from_json(const nlohmann::json& j) {
  MatrixStack out;
  for (const auto& m : j) out.push_back(matrix_from_json(m));
  return out;
}

nlohmann::json channel_to_json(const ChannelRealization& channel) {
  auto paths = nlohmann::json::array();
  for (const auto& p : channel.paths) {
    paths.push_back({{"cluster_index", p.cluster_index},
                     {"ray_index", p.ray_index},
                     {"gain", {p.gain.real(), p.gain.imag()}},
                     {"delay", p.delay},
                     {"aod_azimuth", p.aod_azimuth},
                     {"aod_elevation", p.aod_elevation},
                     {"aoa_azimuth", p.aoa_azimuth},
                     {"aoa_elevation", p.aoa_elevation}});
  }
  return {{"n_rx", channel.n_rx()},
          {"n_tx", channel.n_tx()},
          {"delay_taps", stack_to_json(channel.delay_taps)},
          {"freq_channels", stack_to_json(channel.freq_channels)},
          {"paths", std::move(paths)}};
}

ChannelRealization channel_from_json(const nlohmann::json& j) {
  ChannelRealization c;
  c.delay_taps = stack_from_json(j.at("delay_taps"));
  c.freq_channels = stack_from_json(j.at("freq_channels"));
  for (const auto& p : j.value("paths", nlohmann::json::array())) {
    PathParameters q;
    q.cluster_index = p.at("cluster_index");
    q.ray_index = p.at("ray_index");
    q.gain = {p.at("gain")[0].get<double>(), p.at("gain")[1].get<double>()};
    q.delay = p.at("delay");
    q.aod_azimuth = p.at("aod_azimuth");
    q.aod_elevation = p.at("aod_elevation");
    q.aoa_azimuth = p.at("aoa_azimuth");
    q.aoa_elevation = p.at("aoa_elevation");
    c.paths.push_back(q);
  }
  return c;
}

nlohmann::json precoder_to_json(const HybridPrecoder& precoder) {
  auto alloc = nlohmann::json::array();
  for (Eigen::Index k = 0; k < precoder.allocations.rows(); ++k) {
    std::vector<double> row(precoder.allocations.cols());
    for (Eigen::Index i = 0; i < precoder.allocations.cols(); ++i) row[i] = precoder.allocations(k, i);
    alloc.push_back(row);
  }
  return {{"rf", matrix_to_json(precoder.rf)},
          {"baseband", stack_to_json(precoder.baseband)},
          {"water_level", precoder.water_level},
          {"allocations", std::move(alloc)}};
}

nlohmann::json combiner_to_json(const HybridCombiner& combiner) {
  return {{"rf", matrix_to_json(combiner.rf)},
          {"baseband", stack_to_json(combiner.baseband)},
          {"baseband_pre_eq", stack_to_json(combiner.baseband_pre_eq)}};
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

}  // namespace hbf
