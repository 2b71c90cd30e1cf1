// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Heavier, statistics-backed checks live here rather than
// in the unit suite.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hcq/bench.hpp"
#include "hcq/config.hpp"
#include "hcq/gmvp.hpp"
#include "hcq/landscape.hpp"
#include "hcq/noise.hpp"
#include "hcq/optim.hpp"
#include "hcq/parallel.hpp"
#include "hcq/qaoa.hpp"
#include "hcq/stats.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

int failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%-4s criterion %2d: %-28s %s\n", ok ? "PASS" : "FAIL", criterion, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct Fixture {
  hcq::GmvpInstance inst = hcq::random_instance(42, 4, 3, 3);
  std::vector<double> cost = hcq::build_cost_table(inst);
  hcq::CircuitGeometry geom = hcq::make_geometry(4, 3, 2);
  std::vector<double> theta_star = {0.0, 0.0, 0.14286, 0.85714};
  unsigned jobs = hcq::default_jobs();
};

// 1. Full-circuit noiseless evaluation against the independent dense chain.
void criterion_1(const Fixture& fx) {
  const auto t0 = clock_type::now();
  hcq::RngStream rng(1001);
  double worst = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    hcq::QaoaParams q{{rng.uniform_in(0, 6.2831853), rng.uniform_in(0, 6.2831853)},
                      {rng.uniform_in(0, 3.1415927), rng.uniform_in(0, 3.1415927)}};
    const double fast = hcq::noiseless_expectation(fx.geom, 3, fx.cost, q);
    const double ref = oracle::circuit_chain_expectation(4, 3, 2, fx.geom.couplings, fx.geom.k1,
                                                         fx.geom.k2, 3, fx.cost, q.gammas, q.betas);
    worst = std::max(worst, std::abs(fast - ref));
  }
  const double elapsed = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max |impl - oracle| = %.3e (< 1e-10), %.2f s (< 5 s)", worst,
                elapsed);
  report(1, "simulator exactness", worst < 1e-10 && elapsed < 5.0, buf);
}

// 2. Probability mass outside the Hamming-weight-3 subspace after the circuit.
void criterion_2(const Fixture& fx) {
  hcq::RngStream rng(1002);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    hcq::QaoaParams q{{rng.uniform_in(0, 6.2831853), rng.uniform_in(0, 6.2831853)},
                      {rng.uniform_in(0, 3.1415927), rng.uniform_in(0, 3.1415927)}};
    const auto plan = hcq::build_circuit_plan(fx.geom, 3, q);
    const auto st = hcq::run_noiseless(plan, fx.cost);
    double outside = 0.0;
    for (std::uint64_t j = 0; j < st.amps.size(); ++j)
      if (std::popcount(j) != 3) outside += std::norm(st.amps[j]);
    worst = std::max(worst, outside);
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "max infeasible mass = %.3e (< 1e-10)", worst);
  report(2, "hard-constraint preservation", worst < 1e-10, buf);
}

// 3. Noiseless cost is gamma_1-independent to numerical precision.
void criterion_3(const Fixture& fx) {
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < 50; ++i) {
    std::vector<double> theta = fx.theta_star;
    theta[0] = 6.2831853071795865 * double(i) / 49.0;
    const double v = hcq::noiseless_expectation(fx.geom, 3, fx.cost, hcq::params_from_flat(theta));
    if (i == 0) {
      lo = hi = v;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "sweep spread = %.3e (< 1e-12)", hi - lo);
  report(3, "gamma_1 exact inactivity", hi - lo < 1e-12, buf);
}

// 4. Trajectory-averaged channel vs the analytic density-matrix action.
void criterion_4(const Fixture&) {
  const auto t0 = clock_type::now();
  const hcq::cplx a0 = std::cos(0.6);
  const hcq::cplx a1 = std::polar(std::sin(0.6), 0.4);
  const int trials = 10000;
  bool all_ok = true;
  double worst_sigma = 0.0;
  const double pairs[2][2] = {{380e-6, 400e-6}, {80e-6, 100e-6}};
  int channel_index = 0;
  for (const auto& [t1, t2] : pairs) {
    for (double duration : {50e-9, 150e-9}) {
      const auto ks = hcq::thermal_kraus(t1, t2, duration);
      const double gamma = 1.0 - std::exp(-duration / t1);
      const double lambda = 1.0 - std::exp(-2.0 * duration * (1.0 / t2 - 1.0 / (2.0 * t1)));
      const auto expected =
          oracle::thermal_channel_exact(oracle::pure_density(a0, a1), gamma, lambda);

      hcq::RngStream base(7000 + std::uint64_t(channel_index++));
      std::vector<std::array<hcq::cplx, 4>> samples;
      samples.reserve(trials);
      std::array<hcq::cplx, 4> mean{};
      for (int i = 0; i < trials; ++i) {
        auto st = hcq::new_zero_state(1);
        st.amps[0] = a0;
        st.amps[1] = a1;
        hcq::RngStream rng = base.child(std::uint64_t(i));
        hcq::apply_kraus_trajectory(st, 0, ks, rng);
        samples.push_back(oracle::pure_density(st.amps[0], st.amps[1]));
        for (int k = 0; k < 4; ++k) mean[std::size_t(k)] += samples.back()[std::size_t(k)];
      }
      for (auto& v : mean) v /= double(trials);
      for (int k = 0; k < 4; ++k) {
        double var_re = 0.0, var_im = 0.0;
        for (const auto& s : samples) {
          var_re += std::pow(s[std::size_t(k)].real() - mean[std::size_t(k)].real(), 2);
          var_im += std::pow(s[std::size_t(k)].imag() - mean[std::size_t(k)].imag(), 2);
        }
        const double se_re = std::sqrt(var_re / trials / (trials - 1)) + 1e-15;
        const double se_im = std::sqrt(var_im / trials / (trials - 1)) + 1e-15;
        const double z_re =
            std::abs(mean[std::size_t(k)].real() - expected[std::size_t(k)].real()) / se_re;
        const double z_im =
            std::abs(mean[std::size_t(k)].imag() - expected[std::size_t(k)].imag()) / se_im;
        worst_sigma = std::max({worst_sigma, z_re, z_im});
        if (z_re >= 3.0 || z_im >= 3.0) all_ok = false;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max |z| = %.2f sigma (< 3), %.2f s (< 10 s)", worst_sigma,
                elapsed);
  report(4, "thermal channel fidelity", all_ok && elapsed < 10.0, buf);
}

// 5. Classical optimizer testbed.
void criterion_5(const Fixture&) {
  bool ok = true;
  std::string detail;

  hcq::Objective sphere({{-2, 2}, {-2, 2}}, [](std::span<const double> x) {
    return x[0] * x[0] + x[1] * x[1];
  });
  const std::vector<double> s0 = {1.0, 1.0};
  const auto rs = hcq::minimize_cobyla(sphere, s0, 0.5, 1e-6, 10000);
  ok = ok && rs.best_value < 1e-8;
  detail += "cobyla sphere " + hcq::fmt_g17(rs.best_value);

  const auto rosen = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  hcq::Objective rb({{-5, 5}, {-5, 5}}, rosen);
  const std::vector<double> r0 = {-1.2, 1.0};
  const auto rr = hcq::minimize_powell(rb, r0, 1e-7, 1e-10, 2000);
  ok = ok && rr.best_value < 1e-6 && rr.nfev <= 2000;
  detail += ", powell rosenbrock " + hcq::fmt_g17(rr.best_value) + " in " + std::to_string(rr.nfev);

  const auto rast = [](std::span<const double> x) {
    double s = 20.0;
    for (double v : x) s += v * v - 10.0 * std::cos(6.283185307179586 * v);
    return s;
  };
  hcq::Objective ra({{-5.12, 5.12}, {-5.12, 5.12}}, rast);
  hcq::Objective ra2({{-5.12, 5.12}, {-5.12, 5.12}}, rast);
  const auto rd = hcq::minimize_dual_annealing(ra, 7, {.maxfev = 5000});
  const auto rd2 = hcq::minimize_dual_annealing(ra2, 7, {.maxfev = 5000});
  ok = ok && rd.best_value < 1e-3 && rd.nfev <= 5000;
  ok = ok && rd.best_x == rd2.best_x && rd.nfev == rd2.nfev;  // determinism
  detail += ", anneal rastrigin " + hcq::fmt_g17(rd.best_value) + " in " + std::to_string(rd.nfev);

  report(5, "optimizer testbed", ok, detail);
}

struct BenchCells {
  hcq::BenchConfig cfg;
  // [optimizer][profile] -> cell reports for standard mode
  std::vector<std::vector<hcq::CellReport>> standard;
  // [optimizer] -> filtered-mode noiseless cells (cobyla, powell)
  std::vector<hcq::CellReport> filtered_noiseless;
};

/// Runs exactly the benchmark cells criteria 6 and 7 need, runs parallel.
BenchCells run_acceptance_bench(const Fixture& fx) {
  BenchCells out;
  out.cfg.instance = fx.inst;
  out.cfg.geometry = fx.geom;
  out.cfg.profiles = {hcq::noiseless_profile(),
                      hcq::thermal_profile(380e-6, 400e-6, 50e-9, 150e-9, 1024, "thermal_a")};
  out.cfg.optimizers = {hcq::cobyla_spec(), hcq::powell_spec(), hcq::dual_annealing_spec()};
  out.cfg.runs_per_cell = 10;
  out.cfg.base_seed = 101;

  const auto cost = hcq::build_cost_table(out.cfg.instance);

  struct Task {
    std::size_t opt, prof;
    const char* mode;
    int r;
    hcq::RunRecord* slot;
  };
  out.standard.assign(3, std::vector<hcq::CellReport>(2));
  out.filtered_noiseless.resize(2);
  std::vector<Task> tasks;
  for (std::size_t oi = 0; oi < 3; ++oi)
    for (std::size_t pi = 0; pi < 2; ++pi) {
      auto& cell = out.standard[oi][pi];
      cell.optimizer = out.cfg.optimizers[oi].name;
      cell.profile = out.cfg.profiles[pi].name;
      cell.mode = "standard";
      cell.runs.resize(10);
      for (int r = 0; r < 10; ++r) tasks.push_back({oi, pi, "standard", r, &cell.runs[std::size_t(r)]});
    }
  for (std::size_t oi = 0; oi < 2; ++oi) {  // cobyla, powell
    auto& cell = out.filtered_noiseless[oi];
    cell.optimizer = out.cfg.optimizers[oi].name;
    cell.profile = "noiseless";
    cell.mode = "filtered";
    cell.runs.resize(10);
    for (int r = 0; r < 10; ++r) tasks.push_back({oi, 0, "filtered", r, &cell.runs[std::size_t(r)]});
  }

  hcq::parallel_for(tasks.size(), fx.jobs, [&](std::size_t t) {
    const Task& task = tasks[t];
    *task.slot = hcq::run_single(out.cfg, cost, task.opt, task.prof, task.mode, task.r);
  });
  for (auto& row : out.standard)
    for (auto& cell : row) hcq::finalize_cell(cell);
  for (auto& cell : out.filtered_noiseless) hcq::finalize_cell(cell);
  return out;
}

// 6. Parameter filtering reduces evaluation counts for the fast optimizers.
void criterion_6(const BenchCells& bc) {
  const double cobyla_std = bc.standard[0][0].mean_nfev;
  const double cobyla_filt = bc.filtered_noiseless[0].mean_nfev;
  const double powell_std = bc.standard[1][0].mean_nfev;
  const double powell_filt = bc.filtered_noiseless[1].mean_nfev;
  const bool ok = cobyla_filt < cobyla_std && powell_filt < powell_std;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "mean_nfev cobyla %.1f -> %.1f filtered, powell %.1f -> %.1f filtered",
                cobyla_std, cobyla_filt, powell_std, powell_filt);
  report(6, "filtering economy", ok, buf);
}

// 7. Dual annealing attains the best noiseless mean and a stable thermal spread.
void criterion_7(const BenchCells& bc) {
  const double mean_c = bc.standard[0][0].mean_value;
  const double mean_p = bc.standard[1][0].mean_value;
  const double mean_d = bc.standard[2][0].mean_value;
  const bool mean_ok = mean_d <= mean_c + 1e-9 && mean_d <= mean_p + 1e-9;

  const auto cell_std = [](const hcq::CellReport& cell) {
    std::vector<double> v;
    for (const auto& r : cell.runs) v.push_back(r.best_value);
    return hcq::sample_std(v);
  };
  const double std_c = cell_std(bc.standard[0][1]);
  const double std_p = cell_std(bc.standard[1][1]);
  const double std_d = cell_std(bc.standard[2][1]);
  const double smallest = std::min({std_c, std_p, std_d});
  const bool std_ok = std_d <= 1.5 * smallest;

  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "noiseless means c/p/d = %.6g/%.6g/%.6g; thermal_a std c/p/d = %.3g/%.3g/%.3g",
                mean_c, mean_p, mean_d, std_c, std_p, std_d);
  report(7, "robustness ordering", mean_ok && std_ok, buf);

  // bench-module invariant rides on the same data: evaluation-count ordering
  const double nf_c = bc.standard[0][0].mean_nfev;
  const double nf_p = bc.standard[1][0].mean_nfev;
  const double nf_d = bc.standard[2][0].mean_nfev;
  char buf2[160];
  std::snprintf(buf2, sizeof(buf2), "noiseless mean_nfev c/p/d = %.1f/%.1f/%.1f", nf_c, nf_p, nf_d);
  report(7, "  (exhaustiveness ordering)", nf_d >= nf_p && nf_p >= nf_c, buf2);
}

// 8. Landscape ruggedness grows with decoherence strength.
void criterion_8(const Fixture& fx) {
  const auto t0 = clock_type::now();
  const int res = 30;
  const std::uint64_t seed = 7;
  const auto pair = std::make_pair(2, 3);  // (beta1, beta2)

  const auto sampling = hcq::sampling_profile(1024);
  const auto ta = hcq::thermal_profile(380e-6, 400e-6, 50e-9, 150e-9, 1024, "thermal_a");
  const auto tb = hcq::thermal_profile(80e-6, 100e-6, 50e-9, 150e-9, 1024, "thermal_b");

  const double r_s = hcq::roughness(
      hcq::scan_pair(fx.geom, 3, fx.cost, pair, res, fx.theta_star, sampling, seed, fx.jobs));
  const double r_a = hcq::roughness(
      hcq::scan_pair(fx.geom, 3, fx.cost, pair, res, fx.theta_star, ta, seed, fx.jobs));
  const double r_b = hcq::roughness(
      hcq::scan_pair(fx.geom, 3, fx.cost, pair, res, fx.theta_star, tb, seed, fx.jobs));

  const double wall = seconds_since(t0);
  const double eight_worker_equiv = wall * double(std::min(fx.jobs, 8u)) / 8.0;
  const bool ok = r_b > r_a && r_a > r_s && eight_worker_equiv < 600.0;
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "roughness tb/ta/sampling = %.5g/%.5g/%.5g; %.0f s wall at %u workers "
                "(8-worker equiv %.0f s < 600)",
                r_b, r_a, r_s, wall, fx.jobs, eight_worker_equiv);
  report(8, "ruggedness progression", ok, buf);
}

// 9. Brute-force oracle equals the exhaustive table minimum, exactly.
void criterion_9(const Fixture&) {
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = hcq::random_instance(seed, 4, 3, 3);
    const auto table = hcq::build_cost_table(inst);
    const auto opt = hcq::brute_force_optimum(inst);
    double table_min = std::numeric_limits<double>::infinity();
    std::uint64_t argmin = 0;
    for (std::uint64_t j = 0; j < table.size(); ++j) {
      if (std::popcount(j) != 3) continue;
      if (table[j] < table_min) {
        table_min = table[j];
        argmin = j;
      }
    }
    if (opt.value != table_min || opt.basis_index != argmin) ok = false;
  }
  report(9, "oracle equivalence", ok, "20 instances, exact equality over 220 feasible indices");
}

// 10. The bench command is byte-reproducible.
void criterion_10(const Fixture&) {
  const fs::path dir = fs::temp_directory_path() / "hcq_acceptance_bench";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({
    "profiles": [{"type": "noiseless"}, {"type": "sampling", "shots": 64},
                 {"type": "thermal", "name": "thermal_b", "shots": 32,
                  "t1_us": 80, "t2_us": 100}],
    "optimizers": [{"name": "cobyla", "maxfev": 60, "rho_end": 0.001},
                   {"name": "dual_annealing", "maxfev": 120}],
    "bench": {"runs": 3, "base_seed": 5}
  })";
  const auto run = [&](const std::string& out) {
    const std::string cmd = std::string(HCQ_CLI_PATH) + " bench --config " + cfg.string() +
                            " --out " + (dir / out).string() + " --jobs 2 > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  bool ok = run("r1") == 0 && run("r2") == 0;
  const std::string s1 = slurp(dir / "r1" / "summary.csv");
  ok = ok && !s1.empty() && s1 == slurp(dir / "r2" / "summary.csv");
  ok = ok && slurp(dir / "r1" / "report.json") == slurp(dir / "r2" / "report.json");
  report(10, "bench reproducibility", ok, "two runs, summary.csv and report.json byte-identical");
  fs::remove_all(dir);
}

}  // namespace

int main() {
  const auto t0 = clock_type::now();
  Fixture fx;
  std::printf("acceptance suite: %u workers\n", fx.jobs);

  criterion_1(fx);
  criterion_2(fx);
  criterion_3(fx);
  criterion_4(fx);
  criterion_5(fx);

  const auto t_bench = clock_type::now();
  const BenchCells bc = run_acceptance_bench(fx);
  std::printf("     (benchmark cells: %.0f s)\n", seconds_since(t_bench));
  criterion_6(bc);
  criterion_7(bc);

  criterion_8(fx);
  criterion_9(fx);
  criterion_10(fx);

  std::printf("%s (%d failure%s, %.0f s total)\n", failures == 0 ? "ALL PASS" : "FAILURES",
              failures, failures == 1 ? "" : "s", seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
