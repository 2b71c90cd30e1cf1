// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcq/error.hpp"
#include "hcq/rng.hpp"

namespace hcq {

/// Quadratic portfolio-selection instance: minimize w^T Σ w over block-encoded
/// weights. Each of the n assets owns l qubits; an asset's weight is its
/// block's Hamming weight divided by the excitation budget m, so the feasible
/// set (total Hamming weight exactly m) encodes Σ_t w_t = 1.
struct GmvpInstance {
  int n = 0;                  // assets (blocks)
  int l = 0;                  // qubits per asset
  int m = 0;                  // excitation budget
  std::uint64_t seed = 0;     // generation seed (0 for hand-built instances)
  std::vector<double> sigma;  // n*n, row-major, symmetric, positive diagonal

  int num_qubits() const { return n * l; }
  double sig(int i, int j) const { return sigma[std::size_t(i) * n + j]; }
};

struct WeightVector {
  std::vector<double> weights;  // n entries, each in {0, 1/m, ..., 1}
};

inline void validate_instance(const GmvpInstance& inst) {
  if (inst.n < 2) throw config_error("instance: n must be >= 2");
  if (inst.l < 1) throw config_error("instance: l must be >= 1");
  if (inst.m < 1 || inst.m > inst.n * inst.l)
    throw config_error("instance: m must be in [1, n*l]");
  if (inst.n * inst.l > 24) throw config_error("instance: n*l must be <= 24");
  if (inst.sigma.size() != std::size_t(inst.n) * inst.n)
    throw config_error("instance: sigma must have n*n entries");
  for (int i = 0; i < inst.n; ++i) {
    if (!(inst.sig(i, i) > 0.0)) throw config_error("instance: sigma diagonal must be positive");
    for (int j = 0; j < inst.n; ++j)
      if (std::abs(inst.sig(i, j) - inst.sig(j, i)) > 1e-12)
        throw config_error("instance: sigma is not symmetric");
  }
}

/// Block Hamming weights of a basis index, or nothing when the total weight
/// misses the budget m.
inline std::optional<WeightVector> decode(std::uint64_t basis_index, int n, int l, int m) {
  int total = 0;
  WeightVector w;
  w.weights.resize(std::size_t(n));
  const std::uint64_t block_mask = (std::uint64_t(1) << l) - 1;
  for (int t = 0; t < n; ++t) {
    const int h = std::popcount((basis_index >> (t * l)) & block_mask);
    total += h;
    w.weights[std::size_t(t)] = double(h) / double(m);
  }
  if (total != m) return std::nullopt;
  return w;
}

inline double quadratic_form(const GmvpInstance& inst, const WeightVector& w) {
  double s = 0.0;
  for (int i = 0; i < inst.n; ++i) {
    double row = 0.0;
    for (int j = 0; j < inst.n; ++j) row += inst.sig(i, j) * w.weights[std::size_t(j)];
    s += w.weights[std::size_t(i)] * row;
  }
  return s;
}

/// All basis indices of total Hamming weight m, ascending.
inline std::vector<std::uint64_t> feasible_indices(int n, int l, int m) {
  if (m > n * l) throw usage_error("feasible_indices: m exceeds qubit count");
  std::vector<std::uint64_t> out;
  const std::uint64_t dim = std::uint64_t(1) << (n * l);
  for (std::uint64_t j = 0; j < dim; ++j)
    if (std::popcount(j) == m) out.push_back(j);
  return out;
}

/// Full 2^(n*l) cost table: w^T Σ w on feasible indices, and the instance's
/// infeasibility cost (max feasible cost + 1) elsewhere. Infeasible indices
/// are only reachable through noise; the constant keeps noisy estimates
/// finite without reshaping the feasible landscape.
inline std::vector<double> build_cost_table(const GmvpInstance& inst) {
  const std::uint64_t dim = std::uint64_t(1) << inst.num_qubits();
  std::vector<double> table(dim, 0.0);
  std::vector<bool> feasible(dim, false);
  double max_feasible = 0.0;
  for (std::uint64_t j = 0; j < dim; ++j) {
    if (auto w = decode(j, inst.n, inst.l, inst.m)) {
      table[j] = quadratic_form(inst, *w);
      feasible[j] = true;
      max_feasible = std::max(max_feasible, table[j]);
    }
  }
  const double infeasible_cost = max_feasible + 1.0;
  for (std::uint64_t j = 0; j < dim; ++j)
    if (!feasible[j]) table[j] = infeasible_cost;
  return table;
}

inline double cost_of_index(std::uint64_t basis_index, const GmvpInstance& inst) {
  if (auto w = decode(basis_index, inst.n, inst.l, inst.m)) return quadratic_form(inst, *w);
  double max_feasible = 0.0;
  for (std::uint64_t j : feasible_indices(inst.n, inst.l, inst.m)) {
    const auto w = decode(j, inst.n, inst.l, inst.m);
    max_feasible = std::max(max_feasible, quadratic_form(inst, *w));
  }
  return max_feasible + 1.0;
}

struct Optimum {
  std::uint64_t basis_index = 0;
  double value = 0.0;
};

/// Exact minimizer over the feasible subspace; ties break to the lowest index.
inline Optimum brute_force_optimum(const GmvpInstance& inst) {
  Optimum best;
  bool first = true;
  for (std::uint64_t j : feasible_indices(inst.n, inst.l, inst.m)) {
    const double v = quadratic_form(inst, *decode(j, inst.n, inst.l, inst.m));
    if (first || v < best.value) {
      best = {j, v};
      first = false;
    }
  }
  if (first) throw internal_error("brute_force_optimum: empty feasible set");
  return best;
}

/// Seeded random correlation matrix: Σ = G^T G / rows for a (2n x n) standard
/// normal sample, rescaled to unit diagonal. Always symmetric positive
/// semidefinite with unit diagonal.
inline GmvpInstance random_instance(std::uint64_t seed, int n, int l, int m) {
  if (n < 2) throw config_error("random_instance: n must be >= 2");
  GmvpInstance inst;
  inst.n = n;
  inst.l = l;
  inst.m = m;
  inst.seed = seed;
  const int rows = 2 * n;
  RngStream rng(seed);
  std::vector<double> g(std::size_t(rows) * n);
  for (auto& v : g) v = rng.normal();
  inst.sigma.assign(std::size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int r = 0; r < rows; ++r) s += g[std::size_t(r) * n + i] * g[std::size_t(r) * n + j];
      inst.sigma[std::size_t(i) * n + j] = s / rows;
    }
  std::vector<double> inv_sqrt_diag(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) inv_sqrt_diag[std::size_t(i)] = 1.0 / std::sqrt(inst.sigma[std::size_t(i) * n + i]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      inst.sigma[std::size_t(i) * n + j] *= inv_sqrt_diag[std::size_t(i)] * inv_sqrt_diag[std::size_t(j)];
  // Exact unit diagonal and exact symmetry regardless of rounding.
  for (int i = 0; i < n; ++i) {
    inst.sigma[std::size_t(i) * n + i] = 1.0;
    for (int j = 0; j < i; ++j)
      inst.sigma[std::size_t(j) * n + i] = inst.sigma[std::size_t(i) * n + j];
  }
  validate_instance(inst);
  return inst;
}

inline nlohmann::ordered_json instance_to_json(const GmvpInstance& inst) {
  nlohmann::ordered_json j;
  j["n"] = inst.n;
  j["l"] = inst.l;
  j["m"] = inst.m;
  j["seed"] = inst.seed;
  j["sigma"] = inst.sigma;
  return j;
}

inline GmvpInstance instance_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw config_error("instance: expected a JSON object");
  for (const auto& [key, _] : j.items())
    if (key != "n" && key != "l" && key != "m" && key != "seed" && key != "sigma")
      throw config_error("instance: unknown key '" + key + "'");
  for (const char* key : {"n", "l", "m", "seed", "sigma"})
    if (!j.contains(key)) throw config_error(std::string("instance: missing key '") + key + "'");
  GmvpInstance inst;
  inst.n = j.at("n").get<int>();
  inst.l = j.at("l").get<int>();
  inst.m = j.at("m").get<int>();
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.sigma = j.at("sigma").get<std::vector<double>>();
  validate_instance(inst);
  return inst;
}

inline GmvpInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open instance file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("instance file " + path + ": " + e.what());
  }
  return instance_from_json(j);
}

}  // namespace hcq
