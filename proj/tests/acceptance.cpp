// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "hbf/combiner.hpp"
#include "hbf/experiment.hpp"
#include "hbf/linalg.hpp"
#include "hbf/metrics.hpp"
#include "hbf/schemes.hpp"
#include "oracles.hpp"

using namespace hbf;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. structural invariants

Outcome structural() {
  const auto config = desk_system_defaults();
  double cm_err = 0.0, power_err = 0.0, kkt_err = 0.0, dft_err = 0.0, svd_err = 0.0, diag_err = 0.0;
  const double budget = config.n_subcarriers * config.n_streams;
  for (int trial = 0; trial < 5; ++trial) {
    const auto ch = generate_channel(config, ClusterConfig{}, trial);
    const auto svd = channel_svd(ch);

    const auto naive = oracle::naive_dft(ch.delay_taps, config.n_subcarriers);
    for (int k = 0; k < config.n_subcarriers; ++k) {
      dft_err = std::max(dft_err, (naive[k] - ch.freq_channels[k]).norm());
      const auto& f = svd[k];
      const CMatrix rec = f.u * f.s.cast<Complex>().asDiagonal() * f.v.adjoint();
      svd_err = std::max(svd_err, (rec - ch.freq_channels[k]).norm() / ch.freq_channels[k].norm());
    }

    for (double snr_db : {-10.0, 0.0, 10.0}) {
      const double snr = std::pow(10.0, snr_db / 10.0);
      for (Scheme s : {Scheme::kPca, Scheme::kSomp, Scheme::kDft}) {
        const auto link = design_link(s, ch, svd, config, snr);
        const double m_t = 1.0 / std::sqrt(config.n_tx());
        const double m_r = 1.0 / std::sqrt(config.n_rx());
        cm_err = std::max(cm_err, (link.precoder.rf.cwiseAbs().array() - m_t).abs().maxCoeff());
        cm_err = std::max(cm_err, (link.combiner.rf.cwiseAbs().array() - m_r).abs().maxCoeff());
        power_err = std::max(power_err, std::abs(transmit_power(link.precoder) - budget));
        for (int k = 0; k < config.n_subcarriers; ++k) {
          const CMatrix g = link.combiner.effective(k).adjoint() * ch.freq_channels[k] *
                            link.precoder.effective(k);
          for (int i = 0; i < config.n_streams; ++i) {
            if (link.precoder.stream_active(k, i)) diag_err = std::max(diag_err, std::abs(g(i, i) - 1.0));
          }
        }
        if (s != Scheme::kPca) continue;
        // KKT of the water-filling against independently recomputed gains.
        const CMatrix q = oracle::orthonormalize(link.precoder.rf);
        const double mu = link.precoder.water_level;
        double total = 0.0;
        for (int k = 0; k < config.n_subcarriers; ++k) {
          Eigen::JacobiSVD<CMatrix> e(ch.freq_channels[k] * q);
          for (int i = 0; i < config.n_streams; ++i) {
            const double g2 = snr * e.singularValues()(i) * e.singularValues()(i);
            const double p = link.precoder.allocations(k, i);
            const double floor = config.n_streams / g2;
            total += p;
            if (p > 0.0) {
              kkt_err = std::max(kkt_err, std::abs(p - (mu - floor)) / std::max(1.0, mu));
            } else {
              kkt_err = std::max(kkt_err, std::max(0.0, mu - floor) / std::max(1.0, mu));
            }
          }
        }
        kkt_err = std::max(kkt_err, std::abs(total - budget) / budget);
      }
    }
  }
  Outcome o;
  o.pass = cm_err <= 1e-12 && power_err <= 1e-6 && kkt_err <= 1e-9 && dft_err <= 1e-10 &&
           svd_err <= 1e-9 && diag_err <= 1e-8;
  o.detail = "cm " + fmt("%.1e", cm_err) + ", power " + fmt("%.1e", power_err) + ", kkt " +
             fmt("%.1e", kkt_err) + ", dft " + fmt("%.1e", dft_err) + ", svd " +
             fmt("%.1e", svd_err) + ", diag " + fmt("%.1e", diag_err);
  return o;
}

// ---------------------------------------------------------------------------
// 2. optimality of the principal bases

Outcome unconstrained_optimality() {
  double worst_gap = 0.0;
  int beaten = 0;
  int instances = 0;
  for (int ns : {1, 2}) {
    for (int n_rf : {ns, ns + 1}) {
      SystemConfig config;
      config.tx_array = {1, 6, 0.5, 0.5};
      config.rx_array = {1, 6, 0.5, 0.5};
      config.n_rf_tx = n_rf;
      config.n_rf_rx = n_rf;
      config.n_streams = ns;
      config.n_subcarriers = 4;
      config.max_delay = 1;
      Rng rng(1000 + 10 * ns + n_rf);
      ChannelRealization ch;
      for (int k = 0; k < 4; ++k) ch.freq_channels.push_back(oracle::random_complex(6, 6, rng));
      const auto svd = channel_svd(ch);

      // transmit side
      const auto stack = precoder_stack(svd, ns);
      MatrixStack targets = stack.optimal;
      // receive side: weighted MMSE targets for the designed precoder
      const auto precoder = design_pca_precoder(svd, config, 1.0);
      const auto w = mmse_combiners(ch, precoder, 1.0, 1.0);
      MatrixStack weighted;
      for (int k = 0; k < 4; ++k) {
        weighted.push_back(received_covariance(ch, precoder, 1.0, 1.0, k).root * w[k]);
      }

      for (const MatrixStack* blocks : {&targets, &weighted}) {
        ++instances;
        const CMatrix concat = hconcat(*blocks);
        const CMatrix u = principal_left_basis(concat, n_rf);
        const double achieved = oracle::projection_objective(*blocks, u);
        Eigen::JacobiSVD<CMatrix> ref(concat);
        const double optimum = ref.singularValues().head(n_rf).squaredNorm();
        worst_gap = std::max(worst_gap, std::abs(achieved - optimum));
        Rng search(7 + instances);
        for (int t = 0; t < 100000; ++t) {
          beaten += oracle::projection_objective(*blocks, oracle::random_orthonormal(6, n_rf, search)) >
                    achieved + 1e-12;
        }
      }
    }
  }
  Outcome o;
  o.pass = worst_gap <= 1e-8 && beaten == 0;
  o.detail = std::to_string(instances) + " instances x 1e5 random bases, beaten " +
             std::to_string(beaten) + ", |achieved - optimum| " + fmt("%.1e", worst_gap);
  return o;
}

// ---------------------------------------------------------------------------
// Shared desk-scale SE sweep for criteria 3 and 4.

struct SeSweep {
  std::vector<double> grid{-10.0, -5.0, 0.0, 5.0, 10.0};
  // [scheme][snr index][trial]
  std::map<Scheme, std::vector<std::vector<double>>> se;
  int trials = 0;
};

SeSweep se_sweep(int trials) {
  ExperimentSpec spec = profile("desk");
  SeSweep sweep;
  sweep.trials = trials;
  spec.snr_grid_db = sweep.grid;
  spec.schemes = all_schemes();
  spec.n_trials = trials;
  for (Scheme s : spec.schemes) {
    sweep.se[s].assign(sweep.grid.size(), std::vector<double>(trials, 0.0));
  }
  for (const auto& r : run_trials(spec)) {
    const auto idx = std::find(sweep.grid.begin(), sweep.grid.end(), r.snr_db) - sweep.grid.begin();
    sweep.se[r.scheme][idx][r.trial] = r.se;
  }
  return sweep;
}

// 3. fully-digital dominance
Outcome digital_dominance(const SeSweep& sweep) {
  int violations = 0;
  int checks = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < sweep.grid.size(); ++i) {
    for (int t = 0; t < sweep.trials; ++t) {
      const double dig = sweep.se.at(Scheme::kDigital)[i][t];
      const double pca = sweep.se.at(Scheme::kPca)[i][t];
      ++checks;
      if (!(pca >= 0.0) || pca > dig) {
        ++violations;
        worst = std::max(worst, pca - dig);
      }
    }
  }
  Outcome o;
  o.pass = violations == 0;
  o.detail = std::to_string(sweep.trials) + " trials x " + std::to_string(sweep.grid.size()) +
             " SNR points, " + std::to_string(violations) + " violations of " +
             std::to_string(checks);
  if (violations) o.detail += ", worst excess " + fmt("%.3g", worst);
  return o;
}

// 4. SE ranking with paired standard errors
Outcome se_ranking(const SeSweep& sweep, int trials) {
  bool pass = true;
  std::ostringstream detail;
  for (std::size_t i = 0; i < sweep.grid.size(); ++i) {
    detail << (i ? "; " : "") << sweep.grid[i] << " dB";
    for (Scheme b : {Scheme::kSomp, Scheme::kDft}) {
      double sum = 0.0, sq = 0.0;
      for (int t = 0; t < trials; ++t) {
        const double d = sweep.se.at(Scheme::kPca)[i][t] - sweep.se.at(b)[i][t];
        sum += d;
        sq += d * d;
      }
      const double mean = sum / trials;
      const double se = std::sqrt((sq / trials - mean * mean) * trials / (trials - 1) / trials);
      pass = pass && mean > 2.0 * se;
      detail << " pca-" << to_string(b) << " " << fmt("%.3f", mean) << "/" << fmt("%.3f", se);
    }
  }
  Outcome o;
  o.pass = pass;
  o.detail = std::to_string(trials) + " paired trials, mean gap/paired stderr:" + detail.str();
  return o;
}

// ---------------------------------------------------------------------------
// 5. phase quantization

Outcome quantization_loss() {
  ExperimentSpec spec = profile("desk");
  spec.snr_grid_db = {0.0};
  spec.schemes = {Scheme::kPca};
  spec.n_trials = 200;
  const auto mean_se = [&](PhaseResolution q) {
    spec.system.quant_bits = q;
    double sum = 0.0;
    for (const auto& r : run_trials(spec)) sum += r.se;
    return sum / spec.n_trials;
  };
  const double inf = mean_se(PhaseResolution::unquantized());
  const double q3 = mean_se(PhaseResolution::bits(3));
  const double loss = (inf - q3) / inf;
  Outcome o;
  o.pass = loss < 0.05;
  o.detail = "200 trials at 0 dB: unquantized " + fmt("%.4f", inf) + ", Q=3 " + fmt("%.4f", q3) +
             ", relative loss " + fmt("%.2f%%", 100.0 * loss);
  return o;
}

// ---------------------------------------------------------------------------
// 6. BER ranking at desk scale

Outcome ber_ranking() {
  ExperimentSpec spec = profile("desk");
  spec.schemes = {Scheme::kPca, Scheme::kSomp, Scheme::kDft};
  spec.snr_grid_db.clear();
  for (double s = -4.0; s <= 24.0; s += 2.0) spec.snr_grid_db.push_back(s);
  spec.n_trials = 30;
  spec.ber_enabled = true;
  spec.ber.target_errors = 100;
  spec.ber.max_frames = 400;
  const auto summary = summarize(run_trials(spec), 1e-2);

  // Fewest pooled errors among the points bracketing each crossing.
  std::uint64_t min_errors = ~0ull;
  std::ostringstream detail;
  for (Scheme s : spec.schemes) {
    const auto& at = summary.snr_at_target.at(s);
    detail << " " << to_string(s) << " " << (at ? fmt("%.2f", *at) : std::string("n/a"));
    for (const auto& g : summary.groups) {
      if (g.scheme != s || !at) continue;
      if (std::abs(g.snr_db - *at) <= 2.0) min_errors = std::min(min_errors, g.errors);
    }
  }
  const auto& pca = summary.snr_at_target.at(Scheme::kPca);
  const auto& dft = summary.snr_at_target.at(Scheme::kDft);
  const auto& somp = summary.snr_at_target.at(Scheme::kSomp);
  Outcome o;
  const bool enough = pca && dft && somp && min_errors >= 100;
  o.pass = enough && *pca < *dft && *dft < *somp;
  o.detail = "SNR [dB] at BER 1e-2, required pca < dft < somp:" + detail.str() +
             "; min errors at bracketing points " +
             (min_errors == ~0ull ? std::string("n/a") : std::to_string(min_errors));
  return o;
}

// ---------------------------------------------------------------------------
// 7. AWGN oracle

Outcome awgn_oracle() {
  const int n_sub = 64;
  ChannelRealization ch;
  ch.freq_channels.assign(n_sub, CMatrix::Identity(1, 1));
  HybridPrecoder p;
  p.rf = CMatrix::Identity(1, 1);
  p.baseband.assign(n_sub, CMatrix::Identity(1, 1));
  p.allocations = RMatrix::Ones(n_sub, 1);
  HybridCombiner c;
  c.rf = CMatrix::Identity(1, 1);
  c.baseband.assign(n_sub, CMatrix::Identity(1, 1));
  bool pass = true;
  std::ostringstream detail;
  for (double snr_db : {10.0, 14.0}) {
    const double snr = std::pow(10.0, snr_db / 10.0);
    auto rng = Rng::substream(42, {0x6177676e, static_cast<std::uint64_t>(snr_db)});
    BerOptions opt;
    opt.max_frames = 4000;
    opt.target_errors = ~0ull;
    const auto r = simulate_ber(ch, p, c, snr, 1.0, opt, rng);
    const double ref = oracle::qam16_awgn_ber(snr);
    const double se = std::sqrt(ref * (1 - ref) / r.bits_simulated);
    const double z = (r.ber - ref) / se;
    pass = pass && std::abs(z) < 3.0;
    detail << " " << snr_db << " dB: " << fmt("%.4e", r.ber) << " vs " << fmt("%.4e", ref) << " ("
           << fmt("%+.2f", z) << " se);";
  }
  Outcome o;
  o.pass = pass;
  o.detail = "identity channel, 16-QAM:" + detail.str();
  return o;
}

// ---------------------------------------------------------------------------
// 8. determinism

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "hbf_acceptance";
  fs::create_directories(dir);
  ExperimentSpec spec = profile("desk");
  spec.schemes = all_schemes();
  spec.snr_grid_db = {-5.0, 5.0};
  spec.n_trials = 8;
  spec.ber_enabled = true;
  spec.ber.max_frames = 5;
  std::vector<std::string> outputs;
  for (int threads : {1, 1, 4, 4}) {
    spec.threads = threads;
    spec.output_path = (dir / ("run" + std::to_string(outputs.size()) + ".csv")).string();
    run_experiment(spec);
    outputs.push_back(read_all(spec.output_path));
  }
  bool same = !outputs[0].empty();
  for (const auto& o : outputs) same = same && o == outputs[0];
  Outcome o;
  o.pass = same;
  o.detail = "4 runs (1, 1, 4, 4 threads), " + std::to_string(outputs[0].size()) + " bytes, " +
             (same ? "identical" : "differ");
  return o;
}

}  // namespace

int main() {
  int failed = 0;
  const auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  };

  report(1, "structural invariants", structural);
  report(2, "unconstrained optimality", unconstrained_optimality);
  SeSweep sweep;
  report(3, "fully-digital dominance", [&] {
    sweep = se_sweep(500);
    return digital_dominance(sweep);
  });
  report(4, "SE ranking", [&] { return se_ranking(sweep, 200); });
  report(5, "quantization robustness", quantization_loss);
  report(6, "BER ranking", ber_ranking);
  report(7, "AWGN oracle", awgn_oracle);
  report(8, "determinism", determinism);
  std::printf("%d of 8 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
