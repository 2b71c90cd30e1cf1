// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hcq/error.hpp"
#include "hcq/linalg.hpp"
#include "hcq/rng.hpp"

namespace hcq {

/// Dense statevector over 2^num_qubits basis states.
/// Basis convention (used everywhere): bit i of a basis index is qubit i,
/// qubit 0 least significant.
struct StateVector {
  int num_qubits = 0;
  std::vector<cplx> amps;
};

/// Square gate matrix acting on `arity` qubits. Row/column local indices use
/// the same bit convention as basis indices: bit j of a local index belongs
/// to the j-th target qubit passed to apply_gate.
struct GateMatrix {
  int arity = 0;
  CMat m;
};

inline GateMatrix make_gate(int arity, CMat m) {
  if (m.dim() != (1 << arity)) throw usage_error("gate matrix dimension does not match arity");
  return GateMatrix{arity, std::move(m)};
}

inline StateVector new_zero_state(int num_qubits) {
  if (num_qubits < 1 || num_qubits > 24)
    throw config_error("num_qubits must be in [1, 24], got " + std::to_string(num_qubits));
  StateVector st;
  st.num_qubits = num_qubits;
  st.amps.assign(std::size_t(1) << num_qubits, cplx(0, 0));
  st.amps[0] = 1.0;
  return st;
}

inline double norm_sqr(const StateVector& st) {
  double s = 0.0;
  for (const auto& a : st.amps) s += std::norm(a);
  return s;
}


/// Applies `gate` to the listed target qubits (identity elsewhere).
/// Internally the matrix is split as I + Δ and only nonzero Δ entries are
/// touched, so gates that act on a small subspace (mixer exponentials,
/// zero-angle identities) cost far less than a dense contraction.
inline void apply_gate(StateVector& st, std::span<const int> targets, const GateMatrix& gate) {
  const int a = gate.arity;
  if (static_cast<int>(targets.size()) != a)
    throw usage_error("apply_gate: target count does not match gate arity");
  if (a < 1 || a > 3) throw usage_error("apply_gate: arity must be 1, 2, or 3");
  std::uint64_t seen = 0;
  for (int t : targets) {
    if (t < 0 || t >= st.num_qubits) throw usage_error("apply_gate: target out of range");
    if (seen & (std::uint64_t(1) << t)) throw usage_error("apply_gate: duplicate target");
    seen |= std::uint64_t(1) << t;
  }

  const int dim = 1 << a;
  std::array<std::uint64_t, 8> offs{};
  for (int loc = 0; loc < dim; ++loc) {
    std::uint64_t o = 0;
    for (int j = 0; j < a; ++j)
      if ((loc >> j) & 1) o |= std::uint64_t(1) << targets[j];
    offs[std::size_t(loc)] = o;
  }

  // Deviation from identity.
  struct Dev {
    int r, c;
    cplx v;
  };
  std::array<Dev, 64> dev{};
  int ndev = 0;
  std::uint64_t cols_used = 0;
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      const cplx d = gate.m(r, c) - (r == c ? cplx(1, 0) : cplx(0, 0));
      if (d != 0.0) {
        dev[std::size_t(ndev++)] = {r, c, d};
        cols_used |= std::uint64_t(1) << c;
      }
    }
  if (ndev == 0) return;  // exact identity

  const std::uint64_t groups = st.amps.size() >> a;
  std::uint64_t target_mask = 0;
  for (int t : targets) target_mask |= std::uint64_t(1) << t;
  cplx* amps = st.amps.data();

  // Mixer exponentials deviate from the identity on a single 2x2 block;
  // apply them as a plain two-amplitude rotation.
  if (ndev == 4 && std::popcount(cols_used) == 2 && dev[0].r == dev[0].c && dev[3].r == dev[3].c &&
      dev[1].r == dev[0].r && dev[1].c == dev[3].c && dev[2].r == dev[3].r && dev[2].c == dev[0].c) {
    const std::uint64_t o1 = offs[std::size_t(dev[0].r)];
    const std::uint64_t o2 = offs[std::size_t(dev[3].r)];
    const cplx d11 = dev[0].v, d12 = dev[1].v, d21 = dev[2].v, d22 = dev[3].v;
    std::uint64_t base = 0;
    for (std::uint64_t g = 0; g < groups; ++g) {
      cplx& a1 = amps[base | o1];
      cplx& a2 = amps[base | o2];
      const cplx t1 = a1, t2 = a2;
      a1 += d11 * t1 + d12 * t2;
      a2 += d21 * t1 + d22 * t2;
      base = ((base | target_mask) + 1) & ~target_mask;
    }
    return;
  }

  std::array<cplx, 8> tmp{};
  std::uint64_t base = 0;
  for (std::uint64_t g = 0; g < groups; ++g) {
    for (int c = 0; c < dim; ++c)
      if ((cols_used >> c) & 1) tmp[std::size_t(c)] = amps[base | offs[std::size_t(c)]];
    for (int k = 0; k < ndev; ++k) {
      const Dev& d = dev[std::size_t(k)];
      amps[base | offs[std::size_t(d.r)]] += d.v * tmp[std::size_t(d.c)];
    }
    base = ((base | target_mask) + 1) & ~target_mask;  // next index with target bits clear
  }
}

/// a_j <- exp(-i * phase[j]) * a_j
inline void apply_diagonal_phase(StateVector& st, std::span<const double> phase_of_index) {
  if (phase_of_index.size() != st.amps.size())
    throw usage_error("apply_diagonal_phase: phase table size mismatch");
  for (std::size_t j = 0; j < st.amps.size(); ++j)
    st.amps[j] *= std::polar(1.0, -phase_of_index[j]);
}

/// Σ_j |a_j|^2 * value[j]
inline double expectation_of_diagonal(const StateVector& st, std::span<const double> value_of_index) {
  if (value_of_index.size() != st.amps.size())
    throw usage_error("expectation_of_diagonal: value table size mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < st.amps.size(); ++j) s += std::norm(st.amps[j]) * value_of_index[j];
  return s;
}

/// Cumulative |a_j|^2 table for repeated outcome sampling.
inline std::vector<double> probability_cumulative(const StateVector& st) {
  std::vector<double> cum(st.amps.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < st.amps.size(); ++j) {
    acc += std::norm(st.amps[j]);
    cum[j] = acc;
  }
  return cum;
}

inline std::uint64_t sample_index(std::span<const double> cum, RngStream& rng) {
  const double u = rng.uniform() * cum.back();
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  return std::uint64_t(std::min<std::ptrdiff_t>(it - cum.begin(), std::ptrdiff_t(cum.size()) - 1));
}

/// Multinomial sample of the measurement distribution |a_j|^2.
inline std::map<std::uint64_t, std::uint64_t> sample_counts(const StateVector& st,
                                                            std::uint64_t shots, RngStream& rng) {
  if (shots < 1) throw usage_error("sample_counts: shots must be >= 1");
  const double n = norm_sqr(st);
  if (std::abs(n - 1.0) > 1e-6)
    throw internal_error("sample_counts: state is not normalized (|norm^2 - 1| = " +
                         std::to_string(std::abs(n - 1.0)) + ")");
  const std::vector<double> cum = probability_cumulative(st);
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t s = 0; s < shots; ++s) ++counts[sample_index(cum, rng)];
  return counts;
}

}  // namespace hcq
