// SPDX-License-Identifier: Apache-2.0

#include "hbf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "hbf/channel.hpp"
#include "hbf/serialize.hpp"

namespace hbf {

void validate(const ExperimentSpec& spec) {
  std::vector<std::string> problems = check(spec.system);
  for (auto& p : check(spec.cluster)) problems.push_back(std::move(p));
  if (spec.n_trials < 1) problems.push_back("n_trials must be at least 1");
  if (spec.snr_grid_db.empty()) problems.push_back("snr grid must not be empty");
  for (const double s : spec.snr_grid_db) {
    if (!std::isfinite(s)) problems.push_back("snr grid contains a non-finite value");
  }
  if (spec.schemes.empty()) problems.push_back("at least one scheme is required");
  if (spec.design.somp_oversampling < 1) problems.push_back("somp_oversampling must be >= 1");
  if (spec.ber_enabled && spec.ber.max_frames < 1) problems.push_back("ber max_frames must be >= 1");
  if (spec.threads < 0) problems.push_back("threads must be non-negative");
  if (problems.empty()) return;
  std::ostringstream msg;
  msg << "invalid experiment:";
  for (const auto& p : problems) msg << "\n  - " << p;
  throw ConfigError(msg.str());
}

std::vector<std::string> profile_names() { return {"desk", "paper-se", "paper-ber"}; }

ExperimentSpec profile(const std::string& name) {
  ExperimentSpec spec;
  spec.schemes = all_schemes();
  if (name == "desk") {
    spec.system = desk_system_defaults();
    spec.snr_grid_db = {-10, -5, 0, 5, 10};
    spec.n_trials = 100;
  } else if (name == "paper-se") {
    spec.system = paper_system_defaults();
    spec.snr_grid_db = {-20, -15, -10, -5, 0, 5, 10};
    spec.n_trials = 100;
  } else if (name == "paper-ber") {
    spec.system = paper_system_defaults();
    spec.system.n_subcarriers = 128;
    spec.snr_grid_db.clear();
    for (int s = -30; s <= 6; s += 2) spec.snr_grid_db.push_back(s);
    spec.schemes = {Scheme::kPca, Scheme::kSomp, Scheme::kDft};
    spec.n_trials = 100;
    spec.ber_enabled = true;
    spec.ber.max_frames = 20;
    spec.ber.target_errors = 100;
  } else {
    throw ConfigError("unknown profile '" + name + "' (expected desk, paper-se or paper-ber)");
  }
  return spec;
}

ExperimentSpec spec_from_json(const nlohmann::json& j, ExperimentSpec base) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  try {
    nlohmann::json sys = base.system;
    nlohmann::json patch = nlohmann::json::object();
    for (const char* key : {"tx_array", "rx_array", "n_rf_tx", "n_rf_rx", "n_streams",
                            "n_subcarriers", "max_delay", "snr_db", "quant_bits", "seed"}) {
      if (j.contains(key)) patch[key] = j.at(key);
    }
    sys.merge_patch(patch);
    if (patch.contains("quant_bits") && patch["quant_bits"].is_null()) sys["quant_bits"] = "inf";
    base.system = sys.get<SystemConfig>();
    if (j.contains("cluster")) {
      nlohmann::json cl = base.cluster;
      cl.merge_patch(j.at("cluster"));
      base.cluster = cl.get<ClusterConfig>();
    }
    if (j.contains("snr_grid_db")) base.snr_grid_db = j.at("snr_grid_db").get<std::vector<double>>();
    if (j.contains("schemes")) {
      base.schemes.clear();
      for (const auto& s : j.at("schemes")) base.schemes.push_back(parse_scheme(s.get<std::string>()));
    }
    base.n_trials = j.value("n_trials", base.n_trials);
    base.ber_enabled = j.value("ber", base.ber_enabled);
    base.ber.max_frames = j.value("ber_max_frames", base.ber.max_frames);
    base.ber.target_errors = j.value("ber_target_errors", base.ber.target_errors);
    base.design.somp_oversampling = j.value("somp_oversampling", base.design.somp_oversampling);
    base.output_path = j.value("output", base.output_path);
    base.threads = j.value("threads", base.threads);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  return base;
}

nlohmann::json spec_to_json(const ExperimentSpec& spec) {
  nlohmann::json j = spec.system;
  j["cluster"] = spec.cluster;
  j["snr_grid_db"] = spec.snr_grid_db;
  auto schemes = nlohmann::json::array();
  for (const auto s : spec.schemes) schemes.push_back(to_string(s));
  j["schemes"] = schemes;
  j["n_trials"] = spec.n_trials;
  j["ber"] = spec.ber_enabled;
  j["ber_max_frames"] = spec.ber.max_frames;
  j["ber_target_errors"] = spec.ber.target_errors;
  j["somp_oversampling"] = spec.design.somp_oversampling;
  j["output"] = spec.output_path;
  j["threads"] = spec.threads;
  return j;
}

namespace {

std::vector<ResultRow> run_one_trial(const ExperimentSpec& spec, int trial) {
  const auto channel = generate_channel(spec.system, spec.cluster, trial);
  const auto svd = channel_svd(channel);
  const std::uint64_t hash = channel.fingerprint();
  std::vector<ResultRow> rows;
  for (const auto scheme : spec.schemes) {
    for (std::size_t si = 0; si < spec.snr_grid_db.size(); ++si) {
      const double snr_db = spec.snr_grid_db[si];
      const double snr = std::pow(10.0, snr_db / 10.0);
      try {
        const auto link = design_link(scheme, channel, svd, spec.system, snr, spec.design);
        ResultRow row;
        row.scheme = scheme;
        row.snr_db = snr_db;
        row.se = spectral_efficiency(channel, link.precoder, link.combiner, snr,
                                     spec.design.noise_var, false);
        row.se_eq = spectral_efficiency(channel, link.precoder, link.combiner, snr,
                                        spec.design.noise_var, true);
        if (spec.ber_enabled) {
          Rng rng = Rng::substream(spec.system.seed,
                                   {0x626572ULL, static_cast<std::uint64_t>(trial),
                                    static_cast<std::uint64_t>(scheme), si});
          const auto r = simulate_ber(channel, link.precoder, link.combiner, snr,
                                      spec.design.noise_var, spec.ber, rng);
          row.ber = r.ber;
          row.bits = r.bits_simulated;
          row.errors = r.errors_counted;
        }
        row.seed = spec.system.seed;
        row.trial = trial;
        row.channel_hash = hash;
        rows.push_back(row);
      } catch (const NumericalError& e) {
        throw NumericalError("trial " + std::to_string(trial) + ", scheme " + to_string(scheme) +
                             ", snr " + std::to_string(snr_db) + " dB: " + e.what());
      }
    }
  }
  return rows;
}

}  // namespace

std::vector<ResultRow> run_trials(const ExperimentSpec& spec) {
  validate(spec);
  const int n_threads = std::max(
      1, std::min(spec.n_trials,
                  spec.threads > 0 ? spec.threads
                                   : static_cast<int>(std::thread::hardware_concurrency())));
  std::vector<std::vector<ResultRow>> per_trial(spec.n_trials);
  std::vector<std::exception_ptr> failures(spec.n_trials);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < spec.n_trials; t = next++) {
      try {
        per_trial[t] = run_one_trial(spec, t);
      } catch (...) {
        failures[t] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  std::vector<ResultRow> rows;
  for (auto& t : per_trial) rows.insert(rows.end(), t.begin(), t.end());
  return rows;
}

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kCsvSchemaLine << '\n' << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << to_string(r.scheme) << ',' << fmt_double(r.snr_db) << ',' << fmt_double(r.se) << ','
        << fmt_double(r.ber) << ',' << r.bits << ',' << r.errors << ',' << r.seed << ','
        << r.trial << ',' << fmt_double(r.se_eq) << ',' << r.channel_hash << '\n';
  }
}

std::vector<ResultRow> read_csv(std::istream& in) {
  std::vector<ResultRow> rows;
  std::vector<std::string> problems;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kCsvHeader) {
        problems.push_back("line " + std::to_string(line_no) + ": unexpected header");
      }
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 10) {
      problems.push_back("line " + std::to_string(line_no) + ": expected 10 fields, got " +
                         std::to_string(f.size()));
      continue;
    }
    try {
      ResultRow r;
      r.scheme = parse_scheme(f[0]);
      std::size_t used = 0;
      auto num = [&](const std::string& s) {
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
      };
      auto u64 = [&](const std::string& s) {
        const auto v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return static_cast<std::uint64_t>(v);
      };
      r.snr_db = num(f[1]);
      r.se = num(f[2]);
      r.ber = num(f[3]);
      r.bits = u64(f[4]);
      r.errors = u64(f[5]);
      r.seed = u64(f[6]);
      r.trial = static_cast<int>(u64(f[7]));
      r.se_eq = num(f[8]);
      r.channel_hash = u64(f[9]);
      rows.push_back(r);
    } catch (const std::exception& e) {
      problems.push_back("line " + std::to_string(line_no) + ": malformed field (" + e.what() + ")");
    }
  }
  if (!header_seen) problems.push_back("missing header line");
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "malformed results CSV:";
    for (const auto& p : problems) msg << "\n  " << p;
    throw ConfigError(msg.str());
  }
  return rows;
}

std::optional<double> snr_at_ber(const std::vector<std::pair<double, double>>& snr_ber,
                                 double target) {
  for (std::size_t i = 0; i + 1 < snr_ber.size(); ++i) {
    const auto [s0, b0] = snr_ber[i];
    const auto [s1, b1] = snr_ber[i + 1];
    if (b0 >= target && b1 < target) {
      if (b0 == target) return s0;
      if (b1 <= 0.0) return std::nullopt;
      const double t = (std::log10(target) - std::log10(b0)) / (std::log10(b1) - std::log10(b0));
      return s0 + t * (s1 - s0);
    }
  }
  return std::nullopt;
}

Summary summarize(const std::vector<ResultRow>& rows, double target_ber) {
  Summary out;
  out.target_ber = target_ber;
  std::map<std::pair<Scheme, double>, std::vector<const ResultRow*>> groups;
  std::set<double> grid;
  std::set<Scheme> schemes;
  for (const auto& r : rows) {
    groups[{r.scheme, r.snr_db}].push_back(&r);
    grid.insert(r.snr_db);
    schemes.insert(r.scheme);
  }
  for (const auto scheme : schemes) {
    std::vector<std::pair<double, double>> curve;
    for (const double snr : grid) {
      const auto it = groups.find({scheme, snr});
      if (it == groups.end()) {
        out.warnings.push_back("no rows for scheme " + to_string(scheme) + " at " +
                               fmt_double(snr) + " dB; group omitted");
        continue;
      }
      const auto& members = it->second;
      GroupStats g;
      g.scheme = scheme;
      g.snr_db = snr;
      g.n = static_cast<int>(members.size());
      double sum = 0.0;
      for (const auto* r : members) {
        sum += r->se;
        g.bits += r->bits;
        g.errors += r->errors;
      }
      g.se_mean = sum / g.n;
      if (g.n > 1) {
        double ss = 0.0;
        for (const auto* r : members) ss += (r->se - g.se_mean) * (r->se - g.se_mean);
        g.se_stderr = std::sqrt(ss / (g.n - 1) / g.n);
      }
      if (g.bits > 0) {
        g.ber = static_cast<double>(g.errors) / g.bits;
        g.ber_stderr = std::sqrt(g.ber * (1.0 - g.ber) / g.bits);
        curve.emplace_back(snr, g.ber);
      }
      out.groups.push_back(g);
    }
    out.snr_at_target[scheme] = curve.empty() ? std::nullopt : snr_at_ber(curve, target_ber);
  }
  for (auto a = schemes.begin(); a != schemes.end(); ++a) {
    for (auto b = std::next(a); b != schemes.end(); ++b) {
      const auto& sa = out.snr_at_target[*a];
      const auto& sb = out.snr_at_target[*b];
      if (sa && sb) out.gaps.push_back({*a, *b, *sa - *sb});
    }
  }
  return out;
}

Summary summarize_csv(const std::string& csv_path, double target_ber) {
  std::ifstream in(csv_path);
  if (!in) throw ConfigError("cannot open '" + csv_path + "'");
  return summarize(read_csv(in), target_ber);
}

nlohmann::json summary_to_json(const Summary& s) {
  auto groups = nlohmann::json::array();
  for (const auto& g : s.groups) {
    groups.push_back({{"scheme", to_string(g.scheme)},
                      {"snr_db", g.snr_db},
                      {"n", g.n},
                      {"se_mean", g.se_mean},
                      {"se_stderr", g.se_stderr},
                      {"bits", g.bits},
                      {"errors", g.errors},
                      {"ber", g.ber},
                      {"ber_stderr", g.ber_stderr}});
  }
  nlohmann::json at = nlohmann::json::object();
  for (const auto& [scheme, v] : s.snr_at_target) {
    at[to_string(scheme)] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  }
  auto gaps = nlohmann::json::array();
  for (const auto& g : s.gaps) gaps.push_back({{"a", to_string(g.a)}, {"b", to_string(g.b)}, {"gap_db", g.gap_db}});
  return {{"schema", "hbf-summary/1"},
          {"target_ber", s.target_ber},
          {"groups", groups},
          {"snr_at_target_ber", at},
          {"gaps", gaps},
          {"warnings", s.warnings}};
}

void print_summary(std::ostream& out, const Summary& s) {
  for (const auto& w : s.warnings) out << "warning: " << w << '\n';
  out << std::left << std::setw(9) << "scheme" << std::right << std::setw(9) << "snr_db"
      << std::setw(6) << "n" << std::setw(12) << "se_mean" << std::setw(11) << "se_stderr"
      << std::setw(13) << "ber" << std::setw(13) << "ber_stderr" << '\n';
  for (const auto& g : s.groups) {
    out << std::left << std::setw(9) << to_string(g.scheme) << std::right << std::fixed
        << std::setprecision(2) << std::setw(9) << g.snr_db << std::setw(6) << g.n
        << std::setprecision(4) << std::setw(12) << g.se_mean << std::setw(11) << g.se_stderr
        << std::scientific << std::setprecision(3) << std::setw(13) << g.ber << std::setw(13)
        << g.ber_stderr << std::defaultfloat << '\n';
  }
  if (!s.gaps.empty() || !s.snr_at_target.empty()) {
    out << "SNR at BER " << s.target_ber << ":\n";
    for (const auto& [scheme, v] : s.snr_at_target) {
      out << "  " << to_string(scheme) << ": ";
      if (v) out << std::fixed << std::setprecision(2) << *v << " dB" << std::defaultfloat;
      else out << "not bracketed";
      out << '\n';
    }
    for (const auto& g : s.gaps) {
      out << "  gap " << to_string(g.a) << " - " << to_string(g.b) << ": " << std::fixed
          << std::setprecision(2) << g.gap_db << " dB" << std::defaultfloat << '\n';
    }
  }
}

Summary run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  std::ofstream csv(spec.output_path, std::ios::trunc);
  if (!csv) throw ConfigError("cannot open output '" + spec.output_path + "' for writing");
  if (!spec.dump_channel_path.empty()) {
    write_json_file(spec.dump_channel_path,
                    channel_to_json(generate_channel(spec.system, spec.cluster, 0)));
  }
  const auto rows = run_trials(spec);
  write_csv(csv, rows);
  csv.close();
  if (!csv) throw ConfigError("failed writing '" + spec.output_path + "'");
  auto summary = summarize(rows);
  auto json = summary_to_json(summary);
  json["spec"] = spec_to_json(spec);
  write_json_file(spec.output_path + ".summary.json", json);
  return summary;
}

}  // namespace hbf
