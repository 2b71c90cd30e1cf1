// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hcq/bounds.hpp"
#include "hcq/error.hpp"
#include "hcq/linalg.hpp"
#include "hcq/statevector.hpp"

namespace hcq {

/// Ansatz structure: n blocks of l qubits, p layers, and the ordered block
/// pairs the mixer couples. Qubit k of block t is global qubit t*l + k.
struct CircuitGeometry {
  int n = 0;
  int l = 0;
  int p = 0;
  std::vector<std::pair<int, int>> couplings;
  std::vector<int> k1;  // ascending
  std::vector<int> k2;  // ascending

  int num_qubits() const { return n * l; }
};

/// K1 = {2*c1 mod l : c1 in [1, floor(l/2)]}, K2 = {(2*c2 - 1) mod l :
/// c2 in [1, ceil(l/2)]}; returned sorted ascending.
inline std::pair<std::vector<int>, std::vector<int>> index_sets(int l) {
  if (l < 1) throw config_error("index_sets: l must be >= 1");
  std::vector<int> k1, k2;
  for (int c = 1; c <= l / 2; ++c) k1.push_back((2 * c) % l);
  for (int c = 1; c <= (l + 1) / 2; ++c) k2.push_back((2 * c - 1) % l);
  std::sort(k1.begin(), k1.end());
  std::sort(k2.begin(), k2.end());
  return {k1, k2};
}

/// Ring coupling (t, t+1 mod n) for t = 0..n-1.
inline std::vector<std::pair<int, int>> ring_couplings(int n) {
  std::vector<std::pair<int, int>> c;
  for (int t = 0; t < n; ++t) c.emplace_back(t, (t + 1) % n);
  return c;
}

inline std::vector<std::pair<int, int>> all_pair_couplings(int n) {
  std::vector<std::pair<int, int>> c;
  for (int t = 0; t < n; ++t)
    for (int u = t + 1; u < n; ++u) c.emplace_back(t, u);
  return c;
}

inline CircuitGeometry make_geometry(int n, int l, int p,
                                     std::vector<std::pair<int, int>> couplings = {}) {
  if (n < 2) throw config_error("geometry: n must be >= 2");
  if (l < 1) throw config_error("geometry: l must be >= 1");
  if (n * l > 24) throw config_error("geometry: n*l must be <= 24");
  if (p < 1) throw config_error("geometry: p must be >= 1");
  CircuitGeometry g;
  g.n = n;
  g.l = l;
  g.p = p;
  g.couplings = couplings.empty() ? ring_couplings(n) : std::move(couplings);
  for (auto [t, u] : g.couplings)
    if (t == u || t < 0 || u < 0 || t >= n || u >= n)
      throw config_error("geometry: invalid coupling pair");
  std::tie(g.k1, g.k2) = index_sets(l);
  return g;
}

/// Variational angles; canonical flat order is (γ_1..γ_p, β_1..β_p).
struct QaoaParams {
  std::vector<double> gammas;
  std::vector<double> betas;
};

inline QaoaParams params_from_flat(std::span<const double> flat) {
  if (flat.size() % 2 != 0) throw usage_error("params: flat vector must have even length");
  const std::size_t p = flat.size() / 2;
  QaoaParams q;
  q.gammas.assign(flat.begin(), flat.begin() + std::ptrdiff_t(p));
  q.betas.assign(flat.begin() + std::ptrdiff_t(p), flat.end());
  return q;
}

inline std::vector<double> params_to_flat(const QaoaParams& q) {
  std::vector<double> flat(q.gammas);
  flat.insert(flat.end(), q.betas.begin(), q.betas.end());
  return flat;
}

/// Canonical search box in flat order: γ_i in [0, 2π], β_i in [0, π].
inline std::vector<Bounds> canonical_bounds(int p) {
  std::vector<Bounds> b;
  const double two_pi = 6.283185307179586476925286766559;
  for (int i = 0; i < p; ++i) b.push_back({0.0, two_pi});
  for (int i = 0; i < p; ++i) b.push_back({0.0, two_pi / 2.0});
  return b;
}

inline std::string param_name(int index, int p) {
  return index < p ? "gamma" + std::to_string(index + 1) : "beta" + std::to_string(index - p + 1);
}

// ---------------------------------------------------------------------------
// Mixer generators.
//
// The two-qubit hop  S = -1/2 (X_a Y_b - Y_a X_b) = i(σ+_a σ-_b - σ-_a σ+_b)
// moves one excitation between the same in-block position of two blocks. The
// three-qubit generator is the cross-position hop between slot a = (k+1 of t)
// and slot b = (k of t'), gated on slot c = (k of t) being occupied:
//   P = -1/4 (X_a I_c Y_b - X_a Z_c Y_b - Y_a I_c X_b + Y_a Z_c X_b)
//     = i(σ+_a σ-_b - σ-_a σ+_b) ⊗ |1><1|_c.
// Both commute with the total excitation number, so every layer preserves
// the fixed-Hamming-weight subspace exactly.
// ---------------------------------------------------------------------------

/// 4x4 Hermitian hop generator on slots (qubit of block t, qubit of block t').
/// The matrix is independent of the in-block position k; k only selects the
/// target qubits.
inline GateMatrix s_generator() {
  CMat m = pauli_product({Pauli::X, Pauli::Y});
  {
    CMat yx = pauli_product({Pauli::Y, Pauli::X});
    yx *= cplx(-1, 0);
    m += yx;
  }
  m *= cplx(-0.5, 0);
  return make_gate(2, std::move(m));
}

/// 8x8 Hermitian gated-hop generator on slots
/// (qubit k+1 of block t, qubit k of block t, qubit k of block t').
inline GateMatrix p_generator() {
  CMat m = pauli_product({Pauli::X, Pauli::I, Pauli::Y});
  {
    CMat t = pauli_product({Pauli::X, Pauli::Z, Pauli::Y});
    t *= cplx(-1, 0);
    m += t;
  }
  {
    CMat t = pauli_product({Pauli::Y, Pauli::I, Pauli::X});
    t *= cplx(-1, 0);
    m += t;
  }
  m += pauli_product({Pauli::Y, Pauli::Z, Pauli::X});
  m *= cplx(-0.25, 0);
  return make_gate(3, std::move(m));
}

/// exp(-i beta G) with a post-hoc unitarity check (< 1e-12).
inline GateMatrix exponential_gate(const GateMatrix& generator, double beta) {
  CMat a = generator.m;
  a *= cplx(0.0, -beta);
  CMat e = expm(a);
  const double defect = unitarity_defect(e);
  if (defect > 1e-12)
    throw internal_error("exponential_gate: unitarity defect " + std::to_string(defect));
  return GateMatrix{generator.arity, std::move(e)};
}

/// One gate application inside a mixer layer.
struct GateApplication {
  std::array<int, 3> targets{};
  int arity = 0;
  bool uses_p = false;  // false: S exponential, true: P exponential
};

/// Ordered gate applications of one mixer layer: for each coupling (t, t'),
/// S for k = 0..l-1, P for k in K1, P for k in K2, S for k = 0..l-1 again.
inline std::vector<GateApplication> mixer_layer_ops(const CircuitGeometry& g) {
  std::vector<GateApplication> ops;
  for (auto [t, u] : g.couplings) {
    const auto s_sweep = [&] {
      for (int k = 0; k < g.l; ++k)
        ops.push_back({{t * g.l + k, u * g.l + k, 0}, 2, false});
    };
    const auto p_sweep = [&](const std::vector<int>& ks) {
      for (int k : ks)
        ops.push_back({{t * g.l + (k + 1) % g.l, t * g.l + k, u * g.l + k}, 3, true});
    };
    s_sweep();
    p_sweep(g.k1);
    p_sweep(g.k2);
    s_sweep();
  }
  return ops;
}

/// Mixer layer at a concrete angle: shared exponentials plus the application
/// sequence from mixer_layer_ops.
struct MixerLayer {
  GateMatrix s_gate;
  GateMatrix p_gate;
  std::vector<GateApplication> apps;
};

inline MixerLayer build_mixer_layer(const CircuitGeometry& g, double beta) {
  if (!std::isfinite(beta)) throw usage_error("build_mixer_layer: beta must be finite");
  return MixerLayer{exponential_gate(s_generator(), beta),
                    exponential_gate(p_generator(), beta), mixer_layer_ops(g)};
}

inline void apply_mixer_layer(StateVector& st, const MixerLayer& layer) {
  for (const GateApplication& app : layer.apps)
    apply_gate(st, std::span<const int>(app.targets.data(), std::size_t(app.arity)),
               app.uses_p ? layer.p_gate : layer.s_gate);
}

/// Diagonal phase table for the cost layer: phase(j) = gamma * cost(j).
inline std::vector<double> build_cost_layer(std::span<const double> cost_values, double gamma) {
  std::vector<double> phases(cost_values.size());
  for (std::size_t j = 0; j < phases.size(); ++j) phases[j] = gamma * cost_values[j];
  return phases;
}

/// Feasible reference state: the m lowest-index qubits excited (basis index
/// 2^m - 1), a single computational basis state of Hamming weight m.
inline StateVector prepare_initial(const CircuitGeometry& g, int m) {
  if (m < 1 || m > g.num_qubits())
    throw config_error("prepare_initial: budget m must be in [1, n*l]");
  StateVector st = new_zero_state(g.num_qubits());
  st.amps[0] = 0.0;
  st.amps[(std::uint64_t(1) << m) - 1] = 1.0;
  return st;
}

/// Fully built circuit for one parameter vector: alternating cost phases and
/// mixer layers over the initial state, ready for any execution engine.
struct CircuitPlan {
  std::uint64_t initial_index = 0;
  int num_qubits = 0;
  std::vector<double> layer_gammas;
  std::vector<MixerLayer> mixer_layers;  // one per layer, in application order
};

inline CircuitPlan build_circuit_plan(const CircuitGeometry& g, int m, const QaoaParams& params) {
  if (static_cast<int>(params.gammas.size()) != g.p ||
      static_cast<int>(params.betas.size()) != g.p)
    throw usage_error("circuit: parameter count does not match geometry layers");
  CircuitPlan plan;
  plan.num_qubits = g.num_qubits();
  if (m < 1 || m > plan.num_qubits)
    throw config_error("circuit: budget m must be in [1, n*l]");
  plan.initial_index = (std::uint64_t(1) << m) - 1;
  plan.layer_gammas = params.gammas;
  for (int layer = 0; layer < g.p; ++layer)
    plan.mixer_layers.push_back(build_mixer_layer(g, params.betas[std::size_t(layer)]));
  return plan;
}

/// Noiseless final state of the plan's circuit.
inline StateVector run_noiseless(const CircuitPlan& plan, std::span<const double> cost_values) {
  StateVector st = new_zero_state(plan.num_qubits);
  st.amps[0] = 0.0;
  st.amps[plan.initial_index] = 1.0;
  for (std::size_t layer = 0; layer < plan.mixer_layers.size(); ++layer) {
    const double gamma = plan.layer_gammas[layer];
    for (std::size_t j = 0; j < st.amps.size(); ++j)
      st.amps[j] *= std::polar(1.0, -gamma * cost_values[j]);
    apply_mixer_layer(st, plan.mixer_layers[layer]);
  }
  return st;
}

/// Exact expectation of the cost observable after the circuit.
inline double noiseless_expectation(const CircuitGeometry& g, int m,
                                    std::span<const double> cost_values,
                                    const QaoaParams& params) {
  const CircuitPlan plan = build_circuit_plan(g, m, params);
  const StateVector st = run_noiseless(plan, cost_values);
  return expectation_of_diagonal(st, cost_values);
}

}  // namespace hcq
