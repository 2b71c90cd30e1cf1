// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcq/error.hpp"
#include "hcq/format.hpp"
#include "hcq/gmvp.hpp"
#include "hcq/noise.hpp"
#include "hcq/optim.hpp"
#include "hcq/parallel.hpp"
#include "hcq/qaoa.hpp"
#include "hcq/stats.hpp"

namespace hcq {

struct OptimizerSpec {
  enum class Kind { Cobyla, Powell, DualAnnealing };
  Kind kind = Kind::Cobyla;
  std::string name = "cobyla";
  // cobyla
  double rho_beg = 0.5;
  double rho_end = 1e-4;
  // powell
  double xtol = 1e-4;
  double ftol = 1e-4;
  // dual annealing
  DualAnnealingOptions da;
  // shared evaluation cap (dual annealing reads da.maxfev)
  long maxfev = 1000;
};

inline OptimizerSpec cobyla_spec() { return {}; }

inline OptimizerSpec powell_spec() {
  OptimizerSpec s;
  s.kind = OptimizerSpec::Kind::Powell;
  s.name = "powell";
  return s;
}

inline OptimizerSpec dual_annealing_spec() {
  OptimizerSpec s;
  s.kind = OptimizerSpec::Kind::DualAnnealing;
  s.name = "dual_annealing";
  s.maxfev = s.da.maxfev;
  return s;
}

struct BenchConfig {
  GmvpInstance instance;
  CircuitGeometry geometry;
  std::vector<NoiseProfile> profiles;
  std::vector<OptimizerSpec> optimizers;
  std::vector<std::string> modes = {"standard", "filtered"};
  int runs_per_cell = 10;
  std::uint64_t base_seed = 101;
};

inline void validate_bench_config(const BenchConfig& cfg) {
  if (cfg.runs_per_cell < 2) throw config_error("bench: runs_per_cell must be >= 2");
  if (cfg.modes.empty()) throw config_error("bench: at least one mode required");
  for (const std::string& m : cfg.modes)
    if (m != "standard" && m != "filtered")
      throw config_error("bench: unknown mode '" + m + "'");
  if (cfg.geometry.num_qubits() != cfg.instance.num_qubits())
    throw config_error("bench: geometry and instance disagree on qubit count");
}

struct RunRecord {
  std::uint64_t seed = 0;
  std::vector<double> x0;
  std::vector<double> best_x;
  double best_value = 0.0;  // fresh re-evaluation of best_x under the profile
  long nfev = 0;
};

struct CellReport {
  std::string optimizer;
  std::string profile;
  std::string mode;
  std::vector<RunRecord> runs;
  double mean_value = 0.0;
  double ci95_lo = 0.0;
  double ci95_hi = 0.0;
  double mean_nfev = 0.0;
  double best_value = 0.0;
  double worst_value = 0.0;
};

struct BenchReport {
  std::vector<CellReport> cells;
};

namespace detail {

inline OptResult dispatch_optimizer(const OptimizerSpec& opt, Objective& obj,
                                    std::span<const double> x0, std::uint64_t opt_seed) {
  switch (opt.kind) {
    case OptimizerSpec::Kind::Cobyla:
      return minimize_cobyla(obj, x0, opt.rho_beg, opt.rho_end, opt.maxfev);
    case OptimizerSpec::Kind::Powell:
      return minimize_powell(obj, x0, opt.xtol, opt.ftol, opt.maxfev);
    case OptimizerSpec::Kind::DualAnnealing:
      return minimize_dual_annealing(obj, opt_seed, opt.da);
  }
  throw internal_error("dispatch_optimizer: unreachable");
}

}  // namespace detail

/// One seeded optimization run of a benchmark cell. The x0 draw and all
/// derived streams exclude the mode, so standard and filtered runs of the
/// same (optimizer, profile, r) are paired on identical initial parameters
/// and noise streams. Filtered mode fixes the gammas at their drawn initial
/// values and searches over the betas.
inline RunRecord run_single(const BenchConfig& cfg, std::span<const double> cost_table,
                            std::size_t opt_index, std::size_t prof_index,
                            const std::string& mode, int r) {
  const OptimizerSpec& opt = cfg.optimizers[opt_index];
  const NoiseProfile& prof = cfg.profiles[prof_index];
  const int p = cfg.geometry.p;
  const int dims = 2 * p;

  const RngStream run_base =
      RngStream(cfg.base_seed).child(opt_index * cfg.profiles.size() + prof_index).child(std::uint64_t(r));
  RngStream x0_rng = run_base.child(0);
  const RngStream noise_base = run_base.child(1);
  const std::uint64_t opt_seed = run_base.child(2).seed();
  const RngStream final_rng = run_base.child(3);

  const std::vector<Bounds> box = canonical_bounds(p);
  std::vector<double> x0(static_cast<std::size_t>(dims));
  for (int i = 0; i < dims; ++i)
    x0[std::size_t(i)] = x0_rng.uniform_in(box[std::size_t(i)].lo, box[std::size_t(i)].hi);

  long eval_index = 0;
  Objective base(box, [&](std::span<const double> x) {
    return estimate_cost(cfg.geometry, cfg.instance.m, cost_table, params_from_flat(x), prof,
                         noise_base.child(std::uint64_t(eval_index++)))
        .value;
  });

  OptResult res;
  if (mode == "filtered") {
    std::vector<std::pair<int, double>> fixed;
    for (int g = 0; g < p; ++g) fixed.emplace_back(g, x0[std::size_t(g)]);
    const ParamMask mask = make_mask(dims, std::move(fixed));
    Objective masked = masked_objective(mask, base);
    const std::vector<double> x0_free(x0.begin() + p, x0.end());
    res = detail::dispatch_optimizer(opt, masked, x0_free, opt_seed);
    res.best_x = expand_mask(mask, res.best_x);
  } else {
    res = detail::dispatch_optimizer(opt, base, x0, opt_seed);
  }

  RunRecord rec;
  rec.seed = run_base.seed();
  rec.x0 = std::move(x0);
  rec.best_x = res.best_x;
  rec.nfev = res.nfev;
  rec.best_value = estimate_cost(cfg.geometry, cfg.instance.m, cost_table,
                                 params_from_flat(rec.best_x), prof, final_rng)
                       .value;
  return rec;
}

inline void finalize_cell(CellReport& cell) {
  std::vector<double> values, nfevs;
  for (const RunRecord& r : cell.runs) {
    values.push_back(r.best_value);
    nfevs.push_back(double(r.nfev));
  }
  cell.mean_value = mean(values);
  std::tie(cell.ci95_lo, cell.ci95_hi) = ci95(values);
  cell.mean_nfev = mean(nfevs);
  cell.best_value = *std::min_element(values.begin(), values.end());
  cell.worst_value = *std::max_element(values.begin(), values.end());
}

inline CellReport run_cell(const BenchConfig& cfg, std::span<const double> cost_table,
                           std::size_t opt_index, std::size_t prof_index, const std::string& mode) {
  validate_bench_config(cfg);
  if (opt_index >= cfg.optimizers.size() || prof_index >= cfg.profiles.size())
    throw config_error("run_cell: optimizer/profile index outside the configuration");
  CellReport cell;
  cell.optimizer = cfg.optimizers[opt_index].name;
  cell.profile = cfg.profiles[prof_index].name;
  cell.mode = mode;
  for (int r = 0; r < cfg.runs_per_cell; ++r)
    cell.runs.push_back(run_single(cfg, cost_table, opt_index, prof_index, mode, r));
  finalize_cell(cell);
  return cell;
}

/// Full benchmark matrix, cells ordered (optimizer, profile, mode). Runs are
/// independent seeded tasks; results are identical for any worker count.
inline BenchReport run_bench(const BenchConfig& cfg, unsigned jobs = 1) {
  validate_bench_config(cfg);
  const std::vector<double> cost_table = build_cost_table(cfg.instance);

  BenchReport report;
  struct Task {
    std::size_t cell;
    std::size_t opt, prof;
    const std::string* mode;
    int r;
  };
  std::vector<Task> tasks;
  for (std::size_t oi = 0; oi < cfg.optimizers.size(); ++oi)
    for (std::size_t pi = 0; pi < cfg.profiles.size(); ++pi)
      for (const std::string& mode : cfg.modes) {
        CellReport cell;
        cell.optimizer = cfg.optimizers[oi].name;
        cell.profile = cfg.profiles[pi].name;
        cell.mode = mode;
        cell.runs.resize(std::size_t(cfg.runs_per_cell));
        const std::size_t cell_index = report.cells.size();
        for (int r = 0; r < cfg.runs_per_cell; ++r)
          tasks.push_back({cell_index, oi, pi, &mode, r});
        report.cells.push_back(std::move(cell));
      }

  parallel_for(tasks.size(), jobs, [&](std::size_t t) {
    const Task& task = tasks[t];
    report.cells[task.cell].runs[std::size_t(task.r)] =
        run_single(cfg, cost_table, task.opt, task.prof, *task.mode, task.r);
  });
  for (CellReport& cell : report.cells) finalize_cell(cell);
  return report;
}

inline std::string summary_csv(const BenchReport& report) {
  std::string out =
      "optimizer,profile,mode,mean,ci95_lo,ci95_hi,mean_nfev,best_value,worst_value\n";
  for (const CellReport& c : report.cells) {
    out += c.optimizer + ',' + c.profile + ',' + c.mode + ',';
    out += fmt_g17(c.mean_value) + ',';
    out += fmt_g17(c.ci95_lo) + ',';
    out += fmt_g17(c.ci95_hi) + ',';
    out += fmt_g17(c.mean_nfev) + ',';
    out += fmt_g17(c.best_value) + ',';
    out += fmt_g17(c.worst_value) + '\n';
  }
  return out;
}

inline nlohmann::ordered_json report_json(const BenchReport& report, const BenchConfig& cfg) {
  nlohmann::ordered_json j;
  j["runs_per_cell"] = cfg.runs_per_cell;
  j["base_seed"] = cfg.base_seed;
  j["cells"] = nlohmann::ordered_json::array();
  for (const CellReport& c : report.cells) {
    nlohmann::ordered_json jc;
    jc["optimizer"] = c.optimizer;
    jc["profile"] = c.profile;
    jc["mode"] = c.mode;
    jc["mean"] = c.mean_value;
    jc["ci95_lo"] = c.ci95_lo;
    jc["ci95_hi"] = c.ci95_hi;
    jc["mean_nfev"] = c.mean_nfev;
    jc["best_value"] = c.best_value;
    jc["worst_value"] = c.worst_value;
    jc["runs"] = nlohmann::ordered_json::array();
    for (const RunRecord& r : c.runs) {
      nlohmann::ordered_json jr;
      jr["seed"] = r.seed;
      jr["x0"] = r.x0;
      jr["best_x"] = r.best_x;
      jr["best_value"] = r.best_value;
      jr["nfev"] = r.nfev;
      jc["runs"].push_back(std::move(jr));
    }
    j["cells"].push_back(std::move(jc));
  }
  return j;
}

inline void emit_report(const BenchReport& report, const BenchConfig& cfg,
                        const std::filesystem::path& out_dir) {
  ensure_directory(out_dir);
  write_text_file(out_dir / "summary.csv", summary_csv(report));
  write_text_file(out_dir / "report.json", report_json(report, cfg).dump(2) + "\n");
}

}  // namespace hcq
