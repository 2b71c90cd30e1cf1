// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcq/bench.hpp"
#include "hcq/error.hpp"
#include "hcq/gmvp.hpp"
#include "hcq/noise.hpp"
#include "hcq/qaoa.hpp"

namespace hcq {

/// Parsed top-level run configuration. Every section is schema-validated and
/// unknown keys are rejected before any computation starts.
struct RunConfig {
  GmvpInstance instance;
  CircuitGeometry geometry;
  std::vector<NoiseProfile> profiles;
  std::vector<OptimizerSpec> optimizers;
  int bench_runs = 10;
  std::uint64_t bench_base_seed = 101;
  std::vector<std::string> bench_modes = {"standard", "filtered"};
  int landscape_resolution = 50;
  std::vector<double> theta_star;  // empty means "not configured"
  std::uint64_t landscape_seed = 7;
};

namespace detail {

inline void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                           const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) throw config_error(where + ": unknown key '" + key + "'");
  }
}

inline NoiseProfile parse_profile(const nlohmann::json& j) {
  if (!j.is_object()) throw config_error("profiles: entries must be objects");
  reject_unknown(j, {"type", "name", "shots", "t1_us", "t2_us", "t_1q_ns", "t_2q_ns"}, "profile");
  if (!j.contains("type")) throw config_error("profile: missing 'type'");
  const std::string type = j.at("type").get<std::string>();
  const std::uint64_t shots = j.value("shots", std::uint64_t(1024));
  if (type == "noiseless") {
    NoiseProfile p = noiseless_profile();
    p.name = j.value("name", std::string("noiseless"));
    return p;
  }
  if (type == "sampling") return sampling_profile(shots, j.value("name", std::string("sampling")));
  if (type == "thermal") {
    if (!j.contains("t1_us") || !j.contains("t2_us"))
      throw config_error("thermal profile: t1_us and t2_us are required");
    return thermal_profile(j.at("t1_us").get<double>() * 1e-6, j.at("t2_us").get<double>() * 1e-6,
                           j.value("t_1q_ns", 50.0) * 1e-9, j.value("t_2q_ns", 150.0) * 1e-9,
                           shots, j.value("name", std::string("thermal")));
  }
  throw config_error("profile: unknown type '" + type + "'");
}

inline OptimizerSpec parse_optimizer(const nlohmann::json& j) {
  if (!j.is_object()) throw config_error("optimizers: entries must be objects");
  if (!j.contains("name")) throw config_error("optimizer: missing 'name'");
  const std::string name = j.at("name").get<std::string>();
  if (name == "cobyla") {
    reject_unknown(j, {"name", "rho_beg", "rho_end", "maxfev"}, "optimizer cobyla");
    OptimizerSpec s = cobyla_spec();
    s.rho_beg = j.value("rho_beg", s.rho_beg);
    s.rho_end = j.value("rho_end", s.rho_end);
    s.maxfev = j.value("maxfev", s.maxfev);
    return s;
  }
  if (name == "powell") {
    reject_unknown(j, {"name", "xtol", "ftol", "maxfev"}, "optimizer powell");
    OptimizerSpec s = powell_spec();
    s.xtol = j.value("xtol", s.xtol);
    s.ftol = j.value("ftol", s.ftol);
    s.maxfev = j.value("maxfev", s.maxfev);
    return s;
  }
  if (name == "dual_annealing") {
    reject_unknown(j, {"name", "q_v", "q_a", "t0", "maxfev", "local_polish"},
                   "optimizer dual_annealing");
    OptimizerSpec s = dual_annealing_spec();
    s.da.q_v = j.value("q_v", s.da.q_v);
    s.da.q_a = j.value("q_a", s.da.q_a);
    s.da.t0 = j.value("t0", s.da.t0);
    s.da.maxfev = j.value("maxfev", s.da.maxfev);
    s.da.local_polish = j.value("local_polish", s.da.local_polish);
    s.maxfev = s.da.maxfev;
    if (!(s.da.q_v > 1.0) || !(s.da.q_v < 3.0))
      throw config_error("dual_annealing: q_v must be in (1, 3)");
    return s;
  }
  throw config_error("optimizer: unknown name '" + name + "'");
}

}  // namespace detail

/// Paper-scale defaults: the seed-42 instance, 4 blocks x 3 qubits, p = 2,
/// all four noise profiles, the three optimizers, and the reference
/// parameter point for landscape scans.
inline RunConfig default_config() {
  RunConfig cfg;
  cfg.instance = random_instance(42, 4, 3, 3);
  cfg.geometry = make_geometry(4, 3, 2);
  cfg.profiles = {noiseless_profile(), sampling_profile(1024),
                  thermal_profile(380e-6, 400e-6, 50e-9, 150e-9, 1024, "thermal_a"),
                  thermal_profile(80e-6, 100e-6, 50e-9, 150e-9, 1024, "thermal_b")};
  cfg.optimizers = {cobyla_spec(), powell_spec(), dual_annealing_spec()};
  cfg.theta_star = {0.0, 0.0, 0.14286, 0.85714};
  return cfg;
}

inline RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw config_error("config: expected a JSON object");
  detail::reject_unknown(j, {"instance", "geometry", "profiles", "optimizers", "bench", "landscape"},
                         "config");
  RunConfig cfg;

  if (j.contains("instance")) {
    const auto& ji = j.at("instance");
    if (ji.is_string()) {
      const std::filesystem::path p = ji.get<std::string>();
      cfg.instance = load_instance((p.is_absolute() ? p : base_dir / p).string());
    } else {
      cfg.instance = instance_from_json(ji);
    }
  } else {
    cfg.instance = random_instance(42, 4, 3, 3);
  }

  int n = cfg.instance.n, l = cfg.instance.l, m = cfg.instance.m, p = 2;
  std::vector<std::pair<int, int>> couplings;
  if (j.contains("geometry")) {
    const auto& jg = j.at("geometry");
    detail::reject_unknown(jg, {"n", "l", "m", "p", "couplings"}, "geometry");
    n = jg.value("n", n);
    l = jg.value("l", l);
    m = jg.value("m", m);
    p = jg.value("p", p);
    if (n != cfg.instance.n || l != cfg.instance.l || m != cfg.instance.m)
      throw config_error("geometry: n/l/m disagree with the instance");
    if (jg.contains("couplings")) {
      const auto& jc = jg.at("couplings");
      if (jc.is_string()) {
        const std::string kind = jc.get<std::string>();
        if (kind == "ring") couplings = ring_couplings(n);
        else if (kind == "all_pairs") couplings = all_pair_couplings(n);
        else throw config_error("geometry: unknown couplings '" + kind + "'");
      } else {
        for (const auto& pair : jc) {
          if (!pair.is_array() || pair.size() != 2)
            throw config_error("geometry: couplings entries must be [t, t'] pairs");
          couplings.emplace_back(pair[0].get<int>(), pair[1].get<int>());
        }
      }
    }
  }
  cfg.geometry = make_geometry(n, l, p, std::move(couplings));
  cfg.instance.m = m;

  if (j.contains("profiles")) {
    for (const auto& jp : j.at("profiles")) cfg.profiles.push_back(detail::parse_profile(jp));
  } else {
    cfg.profiles = default_config().profiles;
  }
  for (std::size_t a = 0; a < cfg.profiles.size(); ++a)
    for (std::size_t b = a + 1; b < cfg.profiles.size(); ++b)
      if (cfg.profiles[a].name == cfg.profiles[b].name)
        throw config_error("profiles: duplicate name '" + cfg.profiles[a].name + "'");

  if (j.contains("optimizers")) {
    for (const auto& jo : j.at("optimizers")) cfg.optimizers.push_back(detail::parse_optimizer(jo));
  } else {
    cfg.optimizers = default_config().optimizers;
  }

  if (j.contains("bench")) {
    const auto& jb = j.at("bench");
    detail::reject_unknown(jb, {"runs", "base_seed", "modes"}, "bench");
    cfg.bench_runs = jb.value("runs", cfg.bench_runs);
    cfg.bench_base_seed = jb.value("base_seed", cfg.bench_base_seed);
    if (jb.contains("modes")) cfg.bench_modes = jb.at("modes").get<std::vector<std::string>>();
  }

  if (j.contains("landscape")) {
    const auto& jl = j.at("landscape");
    detail::reject_unknown(jl, {"resolution", "theta_star", "seed"}, "landscape");
    cfg.landscape_resolution = jl.value("resolution", cfg.landscape_resolution);
    cfg.landscape_seed = jl.value("seed", cfg.landscape_seed);
    if (jl.contains("theta_star"))
      cfg.theta_star = jl.at("theta_star").get<std::vector<double>>();
  }
  if (!cfg.theta_star.empty() && static_cast<int>(cfg.theta_star.size()) != 2 * cfg.geometry.p)
    throw config_error("landscape: theta_star must have 2*p entries");

  return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("config file " + path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

inline BenchConfig to_bench_config(const RunConfig& cfg) {
  BenchConfig b;
  b.instance = cfg.instance;
  b.geometry = cfg.geometry;
  b.profiles = cfg.profiles;
  b.optimizers = cfg.optimizers;
  b.modes = cfg.bench_modes;
  b.runs_per_cell = cfg.bench_runs;
  b.base_seed = cfg.bench_base_seed;
  return b;
}

}  // namespace hcq
