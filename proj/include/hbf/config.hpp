// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace hbf {

/// Uniform planar array. Spacings are in carrier wavelengths.
struct ArrayGeometry {
  int n_vertical = 4;
  int n_horizontal = 4;
  double spacing_vertical = 0.5;
  double spacing_horizontal = 0.5;

  int size() const { return n_vertical * n_horizontal; }
  bool operator==(const ArrayGeometry&) const = default;
};

/// Phase-shifter resolution: either a number of bits or unquantized.
class PhaseResolution {
 public:
  static PhaseResolution unquantized() { return PhaseResolution{}; }
  static PhaseResolution bits(int q) { return PhaseResolution{q}; }

  bool is_quantized() const { return bits_.has_value(); }
  int bit_count() const { return bits_.value(); }
  std::string to_string() const;
  /// Accepts "inf", "unquantized" or a positive integer.
  static PhaseResolution parse(const std::string& text);

  bool operator==(const PhaseResolution&) const = default;

 private:
  PhaseResolution() = default;
  explicit PhaseResolution(int q) : bits_(q) {}
  std::optional<int> bits_;
};

struct SystemConfig {
  ArrayGeometry tx_array;
  ArrayGeometry rx_array;
  int n_rf_tx = 4;
  int n_rf_rx = 4;
  int n_streams = 3;
  int n_subcarriers = 32;
  int max_delay = 8;
  double snr_db = 0.0;
  PhaseResolution quant_bits = PhaseResolution::unquantized();
  std::uint64_t seed = 42;

  int n_tx() const { return tx_array.size(); }
  int n_rx() const { return rx_array.size(); }
  /// Linear SNR. Noise variance is fixed to 1, so total power is K * snr.
  double snr_linear() const;

  bool operator==(const SystemConfig&) const = default;
};

struct ClusterConfig {
  int n_clusters = 8;
  int n_rays = 10;
  double angle_spread = 7.5 * 3.14159265358979323846 / 180.0;  // half-width, radians
  double symbol_period = 1.0;
  bool per_ray_delay = false;

  bool operator==(const ClusterConfig&) const = default;
};

/// 8x8 UPAs, 4 RF chains, 3 streams, K=512, D=64.
SystemConfig paper_system_defaults();
/// 4x4 UPAs, K=32, D=8; the profile used for quick runs.
SystemConfig desk_system_defaults();

/// Every violated invariant, one message per entry. Empty when valid.
std::vector<std::string> check(const SystemConfig& config);
std::vector<std::string> check(const ClusterConfig& config);

/// Returns the config unchanged when valid, throws ConfigError listing
/// every violation otherwise.
const SystemConfig& validate(const SystemConfig& config);
const ClusterConfig& validate(const ClusterConfig& config);

void to_json(nlohmann::json& j, const ArrayGeometry& g);
void from_json(const nlohmann::json& j, ArrayGeometry& g);
void to_json(nlohmann::json& j, const PhaseResolution& q);
void from_json(const nlohmann::json& j, PhaseResolution& q);
void to_json(nlohmann::json& j, const SystemConfig& c);
void from_json(const nlohmann::json& j, SystemConfig& c);
void to_json(nlohmann::json& j, const ClusterConfig& c);
void from_json(const nlohmann::json& j, ClusterConfig& c);

}  // namespace hbf
