// SPDX-License-Identifier: Apache-2.0
//
// Command-line workbench: instance generation, the classical oracle,
// pairwise cost-landscape scans, and the optimizer benchmark.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hcq/bench.hpp"
#include "hcq/config.hpp"
#include "hcq/format.hpp"
#include "hcq/gmvp.hpp"
#include "hcq/landscape.hpp"
#include "hcq/parallel.hpp"

namespace {

std::string basis_string(std::uint64_t index, int qubits) {
  std::string s;
  for (int q = qubits - 1; q >= 0; --q) s += ((index >> q) & 1) ? '1' : '0';
  return s;
}

int cmd_instance(std::uint64_t seed, int n, int l, int m, const std::string& out_path) {
  const hcq::GmvpInstance inst = hcq::random_instance(seed, n, l, m);
  hcq::write_text_file(out_path, hcq::instance_to_json(inst).dump(2) + "\n");
  std::cout << "wrote " << out_path << " (n=" << n << ", l=" << l << ", m=" << m
            << ", seed=" << seed << ")\n";
  return 0;
}

int cmd_oracle(const std::string& instance_path) {
  const hcq::GmvpInstance inst =
      instance_path.empty() ? hcq::random_instance(42, 4, 3, 3) : hcq::load_instance(instance_path);
  const auto feasible = hcq::feasible_indices(inst.n, inst.l, inst.m);
  const hcq::Optimum best = hcq::brute_force_optimum(inst);
  const auto w = hcq::decode(best.basis_index, inst.n, inst.l, inst.m);

  std::cout << "feasible states: " << feasible.size() << "\n";
  std::cout << "optimal basis state: |" << basis_string(best.basis_index, inst.num_qubits())
            << "> (index " << best.basis_index << ")\n";
  std::cout << "weights:";
  for (double wi : w->weights) std::cout << ' ' << hcq::fmt_g17(wi);
  std::cout << "\noptimal value: " << hcq::fmt_g17(best.value) << "\n";
  return 0;
}

int cmd_landscape(const std::string& config_path, const std::string& out_dir,
                  const std::string& profile_name, bool svg, unsigned jobs) {
  const hcq::RunConfig cfg =
      config_path.empty() ? hcq::default_config() : hcq::load_config(config_path);
  if (cfg.theta_star.empty())
    throw hcq::config_error("landscape: theta_star missing from config");

  const hcq::NoiseProfile* profile = nullptr;
  for (const auto& p : cfg.profiles)
    if (p.name == profile_name) profile = &p;
  if (!profile)
    throw hcq::config_error("landscape: no profile named '" + profile_name + "' in config");

  const std::vector<double> cost = hcq::build_cost_table(cfg.instance);
  hcq::ensure_directory(out_dir);
  const auto grids =
      hcq::scan_all_pairs(cfg.geometry, cfg.instance.m, cost, cfg.landscape_resolution,
                          cfg.theta_star, *profile, cfg.landscape_seed, jobs);
  for (const auto& grid : grids) {
    hcq::write_grid_files(grid, cfg.geometry.p, out_dir, svg);
    std::cout << hcq::grid_file_stem(grid, cfg.geometry.p)
              << ".csv  roughness=" << hcq::fmt_g17(hcq::roughness(grid)) << "\n";
  }
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out_dir,
              const std::string& mode, unsigned jobs) {
  hcq::RunConfig run_cfg =
      config_path.empty() ? hcq::default_config() : hcq::load_config(config_path);
  hcq::BenchConfig cfg = hcq::to_bench_config(run_cfg);
  if (mode != "both") cfg.modes = {mode};

  const hcq::BenchReport report = hcq::run_bench(cfg, jobs);
  hcq::emit_report(report, cfg, out_dir);
  std::cout << "wrote " << (std::filesystem::path(out_dir) / "summary.csv").string() << " ("
            << report.cells.size() << " cells)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hard-constrained QAOA workbench for block-encoded portfolio selection"};
  app.require_subcommand(1);

  unsigned jobs = hcq::default_jobs();

  auto* inst_cmd = app.add_subcommand("instance", "Generate a seeded random instance file");
  std::uint64_t seed = 42;
  int n = 4, l = 3, m = 3;
  std::string out_path = "instance.json";
  inst_cmd->add_option("--seed", seed)->capture_default_str();
  inst_cmd->add_option("--n", n, "assets")->capture_default_str();
  inst_cmd->add_option("--l", l, "qubits per asset")->capture_default_str();
  inst_cmd->add_option("--m", m, "excitation budget")->capture_default_str();
  inst_cmd->add_option("--out", out_path)->capture_default_str();

  auto* oracle_cmd = app.add_subcommand("oracle", "Print the exhaustive classical optimum");
  std::string instance_path;
  oracle_cmd->add_option("--instance", instance_path, "Instance file (default: built-in seed-42 instance)");

  auto* land_cmd = app.add_subcommand("landscape", "Scan all parameter pairs to CSV grids");
  std::string config_path, land_out = "landscape_out", profile_name = "noiseless";
  bool svg = false;
  land_cmd->add_option("--config", config_path, "Run configuration JSON");
  land_cmd->add_option("--out", land_out)->capture_default_str();
  land_cmd->add_option("--profile", profile_name, "Profile name from the config")
      ->capture_default_str();
  land_cmd->add_flag("--svg", svg, "Also write filled-level-band SVG renderings");
  land_cmd->add_option("--jobs", jobs, "Worker thread cap (results are independent of this)")
      ->capture_default_str();

  auto* bench_cmd = app.add_subcommand("bench", "Run the optimizer benchmark matrix");
  std::string bench_config, bench_out = "bench_out", mode = "both";
  bench_cmd->add_option("--config", bench_config, "Run configuration JSON");
  bench_cmd->add_option("--out", bench_out)->capture_default_str();
  bench_cmd->add_option("--mode", mode, "standard | filtered | both")
      ->check(CLI::IsMember({"standard", "filtered", "both"}))
      ->capture_default_str();
  bench_cmd->add_option("--jobs", jobs, "Worker thread cap (results are independent of this)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (inst_cmd->parsed()) return cmd_instance(seed, n, l, m, out_path);
    if (oracle_cmd->parsed()) return cmd_oracle(instance_path);
    if (land_cmd->parsed()) return cmd_landscape(config_path, land_out, profile_name, svg, jobs);
    if (bench_cmd->parsed()) return cmd_bench(bench_config, bench_out, mode, jobs);
  } catch (const hcq::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const hcq::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hcq::usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
