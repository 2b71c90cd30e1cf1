#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hcq/bench.hpp"
#include "hcq/config.hpp"
#include "hcq/stats.hpp"

namespace {

/// Small, fast benchmark configuration for protocol tests.
hcq::BenchConfig tiny_config() {
  hcq::BenchConfig cfg;
  cfg.instance = hcq::random_instance(42, 4, 3, 3);
  cfg.geometry = hcq::make_geometry(4, 3, 2);
  cfg.profiles = {hcq::noiseless_profile(), hcq::sampling_profile(64)};
  hcq::OptimizerSpec cobyla = hcq::cobyla_spec();
  cobyla.maxfev = 40;
  cobyla.rho_end = 1e-2;
  hcq::OptimizerSpec powell = hcq::powell_spec();
  powell.maxfev = 60;
  cfg.optimizers = {cobyla, powell};
  cfg.runs_per_cell = 3;
  cfg.base_seed = 404;
  return cfg;
}

}  // namespace

TEST_CASE("bench produces the full cell matrix with per-run records", "[bench]") {
  const auto cfg = tiny_config();
  const auto report = hcq::run_bench(cfg, 2);
  REQUIRE(report.cells.size() == 2 * 2 * 2);  // optimizer x profile x mode
  for (const auto& cell : report.cells) {
    REQUIRE(cell.runs.size() == 3);
    REQUIRE(cell.ci95_lo <= cell.mean_value);
    REQUIRE(cell.mean_value <= cell.ci95_hi);
    for (const auto& run : cell.runs) {
      REQUIRE(run.x0.size() == 4);
      REQUIRE(run.best_x.size() == 4);
      REQUIRE(run.nfev > 0);
    }
  }
  // ordering is optimizer-major, then profile, then mode
  REQUIRE(report.cells[0].optimizer == "cobyla");
  REQUIRE(report.cells[0].profile == "noiseless");
  REQUIRE(report.cells[0].mode == "standard");
  REQUIRE(report.cells[1].mode == "filtered");
  REQUIRE(report.cells[2].profile == "sampling");
  REQUIRE(report.cells[4].optimizer == "powell");
}

TEST_CASE("standard and filtered runs are paired on identical draws", "[bench]") {
  const auto cfg = tiny_config();
  const auto report = hcq::run_bench(cfg, 1);
  const auto& standard = report.cells[0];
  const auto& filtered = report.cells[1];
  for (int r = 0; r < cfg.runs_per_cell; ++r) {
    REQUIRE(standard.runs[std::size_t(r)].x0 == filtered.runs[std::size_t(r)].x0);
    // filtered mode pins the gammas at their drawn initial values
    REQUIRE(filtered.runs[std::size_t(r)].best_x[0] == filtered.runs[std::size_t(r)].x0[0]);
    REQUIRE(filtered.runs[std::size_t(r)].best_x[1] == filtered.runs[std::size_t(r)].x0[1]);
  }
}

TEST_CASE("bench reports are deterministic and worker independent", "[bench]") {
  const auto cfg = tiny_config();
  const auto a = hcq::run_bench(cfg, 1);
  const auto b = hcq::run_bench(cfg, 3);
  REQUIRE(hcq::summary_csv(a) == hcq::summary_csv(b));
  REQUIRE(hcq::report_json(a, cfg).dump() == hcq::report_json(b, cfg).dump());
}

TEST_CASE("run_cell matches the parallel path", "[bench]") {
  const auto cfg = tiny_config();
  const auto cost = hcq::build_cost_table(cfg.instance);
  const auto report = hcq::run_bench(cfg, 2);
  const auto cell = hcq::run_cell(cfg, cost, 1, 0, "filtered");
  for (int r = 0; r < cfg.runs_per_cell; ++r) {
    const auto& a = cell.runs[std::size_t(r)];
    // powell, noiseless, filtered lives at index 4 + 0*2 + 1
    const auto& b = report.cells[5].runs[std::size_t(r)];
    REQUIRE(a.x0 == b.x0);
    REQUIRE(a.best_x == b.best_x);
    REQUIRE(a.best_value == b.best_value);
    REQUIRE(a.nfev == b.nfev);
  }
}

TEST_CASE("summary statistics recompute exactly from the run records", "[bench]") {
  const auto cfg = tiny_config();
  const auto report = hcq::run_bench(cfg, 2);
  for (const auto& cell : report.cells) {
    std::vector<double> values, nfevs;
    for (const auto& run : cell.runs) {
      values.push_back(run.best_value);
      nfevs.push_back(double(run.nfev));
    }
    REQUIRE(cell.mean_value == hcq::mean(values));
    const auto [lo, hi] = hcq::ci95(values);
    REQUIRE(cell.ci95_lo == lo);
    REQUIRE(cell.ci95_hi == hi);
    REQUIRE(cell.mean_nfev == hcq::mean(nfevs));
    REQUIRE(cell.best_value == *std::min_element(values.begin(), values.end()));
    REQUIRE(cell.worst_value == *std::max_element(values.begin(), values.end()));
  }
}

TEST_CASE("summary csv header and empty report", "[bench]") {
  hcq::BenchReport empty;
  const std::string csv = hcq::summary_csv(empty);
  REQUIRE(csv == "optimizer,profile,mode,mean,ci95_lo,ci95_hi,mean_nfev,best_value,worst_value\n");
}

TEST_CASE("bench config validation", "[bench]") {
  auto cfg = tiny_config();
  cfg.runs_per_cell = 1;
  REQUIRE_THROWS_AS(hcq::validate_bench_config(cfg), hcq::config_error);
  cfg = tiny_config();
  cfg.modes = {"sideways"};
  REQUIRE_THROWS_AS(hcq::validate_bench_config(cfg), hcq::config_error);
  cfg = tiny_config();
  cfg.modes.clear();
  REQUIRE_THROWS_AS(hcq::validate_bench_config(cfg), hcq::config_error);
}

TEST_CASE("default config carries the reference profiles", "[bench][config]") {
  const auto cfg = hcq::default_config();
  REQUIRE(cfg.profiles.size() == 4);
  REQUIRE(cfg.profiles[3].name == "thermal_b");
  REQUIRE(cfg.profiles[3].t1 == Catch::Approx(80e-6));
  REQUIRE(cfg.profiles[3].t2 == Catch::Approx(100e-6));
  REQUIRE(cfg.profiles[3].t_1q == Catch::Approx(50e-9));
  REQUIRE(cfg.profiles[3].t_2q == Catch::Approx(150e-9));
  REQUIRE(cfg.profiles[3].shots == 1024);
  REQUIRE(cfg.profiles[2].name == "thermal_a");
  REQUIRE(cfg.profiles[2].t1 == Catch::Approx(380e-6));
  REQUIRE(cfg.theta_star == std::vector<double>{0.0, 0.0, 0.14286, 0.85714});
  REQUIRE(cfg.optimizers.size() == 3);
  REQUIRE(cfg.optimizers[2].da.maxfev == 2000);
  REQUIRE(cfg.bench_runs == 10);
  REQUIRE(cfg.landscape_resolution == 50);
}

TEST_CASE("run config parsing round trip", "[bench][config]") {
  const nlohmann::json j = nlohmann::json::parse(R"({
    "geometry": {"p": 2, "couplings": "ring"},
    "profiles": [{"type": "noiseless"},
                 {"type": "thermal", "name": "thermal_b", "shots": 128,
                  "t1_us": 80, "t2_us": 100, "t_1q_ns": 50, "t_2q_ns": 150}],
    "optimizers": [{"name": "cobyla", "maxfev": 50}],
    "bench": {"runs": 4, "base_seed": 11, "modes": ["standard"]},
    "landscape": {"resolution": 5, "theta_star": [0, 0, 0.14286, 0.85714], "seed": 3}
  })");
  const auto cfg = hcq::parse_config(j, ".");
  REQUIRE(cfg.instance.seed == 42);  // default instance
  REQUIRE(cfg.profiles.size() == 2);
  REQUIRE(cfg.profiles[1].name == "thermal_b");
  REQUIRE(cfg.profiles[1].t1 == Catch::Approx(80e-6));
  REQUIRE(cfg.optimizers.size() == 1);
  REQUIRE(cfg.optimizers[0].maxfev == 50);
  REQUIRE(cfg.bench_runs == 4);
  REQUIRE(cfg.landscape_resolution == 5);

  nlohmann::json bad = j;
  bad["surprise"] = true;
  REQUIRE_THROWS_AS(hcq::parse_config(bad, "."), hcq::config_error);
  bad = j;
  bad["profiles"][0]["typo"] = 1;
  REQUIRE_THROWS_AS(hcq::parse_config(bad, "."), hcq::config_error);
  bad = j;
  bad["landscape"]["theta_star"] = std::vector<double>{1.0};
  REQUIRE_THROWS_AS(hcq::parse_config(bad, "."), hcq::config_error);
  bad = j;
  bad["geometry"]["n"] = 5;  // disagrees with the default instance
  REQUIRE_THROWS_AS(hcq::parse_config(bad, "."), hcq::config_error);
}
