// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver: SNR sweeps over hybrid precoding schemes and
// summaries of the resulting CSV files.

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

#include "hbf/experiment.hpp"
#include "hbf/serialize.hpp"

namespace {

std::vector<double> parse_snr_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ':')) {
    try {
      parts.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw hbf::ConfigError("--snr: cannot parse '" + text + "'");
    }
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw hbf::ConfigError("--snr: expected a:b:step with a <= b and step > 0");
  }
  std::vector<double> grid;
  const int n = static_cast<int>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (int i = 0; i <= n; ++i) grid.push_back(parts[0] + i * parts[2]);
  return grid;
}

void check_paper_ber_reference(const hbf::Summary& s) {
  using hbf::Scheme;
  auto gap = [&](Scheme other) -> std::optional<double> {
    const auto& p = s.snr_at_target.count(Scheme::kPca) ? s.snr_at_target.at(Scheme::kPca) : std::nullopt;
    const auto& o = s.snr_at_target.count(other) ? s.snr_at_target.at(other) : std::nullopt;
    if (!p || !o) return std::nullopt;
    return *o - *p;
  };
  const auto dft = gap(Scheme::kDft);
  const auto somp = gap(Scheme::kSomp);
  const bool dft_ok = dft && *dft >= 0.5 && *dft <= 4.0;
  const bool somp_ok = somp && *somp >= 5.0;
  std::cout << (dft_ok ? "PASS" : "FAIL") << " paper-ber reference: dft - pca gap at BER 1e-2 = "
            << (dft ? std::to_string(*dft) : std::string("n/a")) << " dB (expected [0.5, 4])\n";
  std::cout << (somp_ok ? "PASS" : "FAIL") << " paper-ber reference: somp - pca gap at BER 1e-2 = "
            << (somp ? std::to_string(*somp) : std::string("n/a")) << " dB (expected >= 5)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wideband hybrid precoding simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an SNR sweep and write results CSV + JSON summary");
  std::string config_path;
  std::string profile_name = "desk";
  std::vector<std::string> schemes;
  std::string snr_range;
  int trials = 0;
  bool ber = false;
  std::string q_bits;
  std::int64_t seed = -1;
  std::string out_path;
  std::string dump_channel;
  int threads = -1;
  run->add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  run->add_option("--profile", profile_name, "Preset: desk, paper-se, paper-ber")
      ->capture_default_str();
  run->add_option("--scheme", schemes, "Schemes: pca somp dft digital")->delimiter(',');
  run->add_option("--snr", snr_range, "SNR grid a:b:step in dB, or a single value");
  run->add_option("--trials", trials, "Monte Carlo trials");
  run->add_flag("--ber", ber, "Also simulate 16-QAM BER");
  run->add_option("--q-bits", q_bits, "Phase-shifter bits, or 'inf'");
  run->add_option("--seed", seed, "RNG seed");
  run->add_option("--out", out_path, "Results CSV path");
  run->add_option("--dump-channel", dump_channel, "Write the trial-0 channel as JSON");
  run->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* sum = app.add_subcommand("summarize", "Summarize a results CSV");
  std::string in_path;
  double target_ber = 1e-2;
  sum->add_option("--in", in_path, "Results CSV")->required();
  sum->add_option("--target-ber", target_ber, "BER for SNR-gap estimates")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      hbf::ExperimentSpec spec = hbf::profile(profile_name);
      if (!config_path.empty()) spec = hbf::spec_from_json(hbf::read_json_file(config_path), spec);
      if (!schemes.empty()) {
        spec.schemes.clear();
        for (const auto& s : schemes) spec.schemes.push_back(hbf::parse_scheme(s));
      }
      if (!snr_range.empty()) spec.snr_grid_db = parse_snr_range(snr_range);
      if (trials != 0) spec.n_trials = trials;
      if (ber) spec.ber_enabled = true;
      if (!q_bits.empty()) spec.system.quant_bits = hbf::PhaseResolution::parse(q_bits);
      if (seed >= 0) spec.system.seed = static_cast<std::uint64_t>(seed);
      if (!out_path.empty()) spec.output_path = out_path;
      if (!dump_channel.empty()) spec.dump_channel_path = dump_channel;
      if (threads >= 0) spec.threads = threads;

      if (spec.system.n_tx() >= 64 && spec.system.n_subcarriers >= 128) {
        std::cerr << "warning: full-scale profile (" << spec.system.n_tx() << " antennas, K="
                  << spec.system.n_subcarriers << "); expect hours of runtime\n";
      }
      const auto summary = hbf::run_experiment(spec);
      hbf::print_summary(std::cout, summary);
      std::cout << "wrote " << spec.output_path << " and " << spec.output_path
                << ".summary.json\n";
      if (profile_name == "paper-ber") check_paper_ber_reference(summary);
    } else if (sum->parsed()) {
      const auto summary = hbf::summarize_csv(in_path, target_ber);
      hbf::print_summary(std::cout, summary);
    }
  } catch (const hbf::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const hbf::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
