// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hbf/config.hpp"
#include "hbf/metrics.hpp"
#include "hbf/schemes.hpp"

namespace hbf {

struct ExperimentSpec {
  SystemConfig system;
  ClusterConfig cluster;
  std::vector<double> snr_grid_db{0.0};
  std::vector<Scheme> schemes{Scheme::kPca, Scheme::kDigital};
  int n_trials = 100;
  bool ber_enabled = false;
  BerOptions ber;              // per (trial, scheme, snr) row
  DesignOptions design;
  std::string output_path = "results.csv";
  std::string dump_channel_path;  // trial-0 realization as JSON, empty to skip
  int threads = 0;                // 0 = hardware concurrency
};

/// Throws ConfigError listing every problem.
void validate(const ExperimentSpec& spec);

/// Named presets: "desk" (4x4, K=32, D=8), "paper-se" (8x8, K=512, D=64),
/// "paper-ber" (8x8, K=128, D=64, BER on).
ExperimentSpec profile(const std::string& name);
std::vector<std::string> profile_names();

/// Reads a JSON spec: system keys at top level, plus "cluster", "snr_grid_db",
/// "schemes", "n_trials", "ber", "ber_max_frames", "ber_target_errors",
/// "somp_oversampling", "output", "threads". Missing keys keep `base` values.
ExperimentSpec spec_from_json(const nlohmann::json& j, ExperimentSpec base = {});
nlohmann::json spec_to_json(const ExperimentSpec& spec);

struct ResultRow {
  Scheme scheme = Scheme::kPca;
  double snr_db = 0.0;
  double se = 0.0;       // headline, pre-equalization combiner
  double ber = 0.0;
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
  std::uint64_t seed = 0;
  int trial = 0;
  double se_eq = 0.0;    // equalized combiner
  std::uint64_t channel_hash = 0;
};

/// All (trial, scheme, snr) rows ordered by trial, then scheme, then snr.
/// Trials run on a worker pool; every scheme in a trial sees the same
/// realization. Output does not depend on the thread count.
std::vector<ResultRow> run_trials(const ExperimentSpec& spec);

inline constexpr const char* kCsvSchemaLine = "# hbf-results v1";
inline constexpr const char* kCsvHeader =
    "scheme,snr_db,se,ber,bits,errors,seed,trial,se_eq,channel_hash";

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
/// Throws ConfigError naming the offending line numbers.
std::vector<ResultRow> read_csv(std::istream& in);

struct GroupStats {
  Scheme scheme = Scheme::kPca;
  double snr_db = 0.0;
  int n = 0;
  double se_mean = 0.0;
  double se_stderr = 0.0;  // sample std / sqrt(n); 0 for n = 1
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
  double ber = 0.0;        // pooled errors / bits
  double ber_stderr = 0.0;
};

struct SnrGap {
  Scheme a;
  Scheme b;
  double gap_db;  // snr_a - snr_b at the target BER
};

struct Summary {
  std::vector<GroupStats> groups;  // ordered by scheme, then snr
  double target_ber = 1e-2;
  std::map<Scheme, std::optional<double>> snr_at_target;
  std::vector<SnrGap> gaps;
  std::vector<std::string> warnings;
};

Summary summarize(const std::vector<ResultRow>& rows, double target_ber = 1e-2);
Summary summarize_csv(const std::string& csv_path, double target_ber = 1e-2);

/// SNR where a BER curve crosses `target`, interpolating log10(BER)
/// linearly in SNR between the first bracketing pair of points with
/// non-zero BER. Points must be sorted by SNR.
std::optional<double> snr_at_ber(const std::vector<std::pair<double, double>>& snr_ber,
                                 double target);

nlohmann::json summary_to_json(const Summary& summary);
void print_summary(std::ostream& out, const Summary& summary);

/// run_trials, write the CSV to spec.output_path and the JSON summary next
/// to it (<output>.summary.json), dump the trial-0 channel if requested.
Summary run_experiment(const ExperimentSpec& spec);

}  // namespace hbf
