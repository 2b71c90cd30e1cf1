// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "hcq/error.hpp"
#include "hcq/linalg.hpp"
#include "hcq/rng.hpp"
#include "hcq/statevector.hpp"

namespace hcq {

/// Single-qubit quantum channel as a set of 2x2 Kraus operators with the
/// physical duration it models.
struct KrausSet {
  std::vector<CMat> operators;  // each 2x2
  double duration = 0.0;        // seconds
};

/// ‖Σ K†K − I‖_max
inline double completeness_defect(const KrausSet& ks) {
  CMat sum(2);
  for (const CMat& k : ks.operators) sum += dagger(k) * k;
  sum(0, 0) -= 1.0;
  sum(1, 1) -= 1.0;
  return max_abs(sum);
}

namespace detail {

/// ‖K ψ‖² for each operator, in one pass over the amplitude pairs of `qubit`.
inline void kraus_branch_probs(const StateVector& st, int qubit, const KrausSet& ks,
                               std::span<double> out) {
  const std::size_t nops = ks.operators.size();
  for (std::size_t i = 0; i < nops; ++i) out[i] = 0.0;
  const std::uint64_t bit = std::uint64_t(1) << qubit;
  const std::uint64_t n = st.amps.size();
  const cplx* amps = st.amps.data();
  for (std::uint64_t lo = 0; lo < n; ++lo) {
    if (lo & bit) continue;
    const cplx a0 = amps[lo];
    const cplx a1 = amps[lo | bit];
    for (std::size_t i = 0; i < nops; ++i) {
      const CMat& k = ks.operators[i];
      out[i] += std::norm(k(0, 0) * a0 + k(0, 1) * a1) + std::norm(k(1, 0) * a0 + k(1, 1) * a1);
    }
  }
}

/// ψ <- (K ψ) / scale for a 2x2 operator on one qubit.
inline void apply_two_by_two(StateVector& st, int qubit, const CMat& k, double scale) {
  const std::uint64_t bit = std::uint64_t(1) << qubit;
  const std::uint64_t n = st.amps.size();
  const double inv = 1.0 / scale;
  const cplx k00 = k(0, 0) * inv, k01 = k(0, 1) * inv;
  const cplx k10 = k(1, 0) * inv, k11 = k(1, 1) * inv;
  cplx* amps = st.amps.data();
  for (std::uint64_t lo = 0; lo < n; ++lo) {
    if (lo & bit) continue;
    const cplx a0 = amps[lo];
    const cplx a1 = amps[lo | bit];
    amps[lo] = k00 * a0 + k01 * a1;
    amps[lo | bit] = k10 * a0 + k11 * a1;
  }
}

}  // namespace detail

/// One stochastic channel realization: selects operator K_i with probability
/// ‖K_i ψ‖² and replaces ψ by the normalized K_i ψ. Averaging |ψ⟩⟨ψ| over
/// many trajectories converges to the channel's density-matrix action.
inline void apply_kraus_trajectory(StateVector& st, int qubit, const KrausSet& ks,
                                   RngStream& rng) {
  if (qubit < 0 || qubit >= st.num_qubits) throw usage_error("apply_kraus_trajectory: bad qubit");
  std::vector<double> probs(ks.operators.size());
  detail::kraus_branch_probs(st, qubit, ks, probs);
  double total = 0.0;
  for (double p : probs) total += p;
  if (total < 1e-15)
    throw internal_error("apply_kraus_trajectory: all branch norms vanish");
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t pick = probs.size() - 1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) {
      pick = i;
      break;
    }
  }
  detail::apply_two_by_two(st, qubit, ks.operators[pick], std::sqrt(probs[pick]));
}

}  // namespace hcq
