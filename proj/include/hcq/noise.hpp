// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hcq/error.hpp"
#include "hcq/gmvp.hpp"
#include "hcq/kraus.hpp"
#include "hcq/qaoa.hpp"
#include "hcq/rng.hpp"
#include "hcq/statevector.hpp"

namespace hcq {

enum class ProfileKind { Noiseless, Sampling, Thermal };

/// Execution regime of one cost evaluation. Times are in seconds.
struct NoiseProfile {
  ProfileKind kind = ProfileKind::Noiseless;
  std::string name = "noiseless";
  std::uint64_t shots = 0;
  double t1 = 0.0;
  double t2 = 0.0;
  double t_1q = 0.0;
  double t_2q = 0.0;
};

inline NoiseProfile noiseless_profile() { return {}; }

inline NoiseProfile sampling_profile(std::uint64_t shots, std::string name = "sampling") {
  if (shots < 1) throw config_error("profile: shots must be >= 1");
  NoiseProfile p;
  p.kind = ProfileKind::Sampling;
  p.name = std::move(name);
  p.shots = shots;
  return p;
}

inline NoiseProfile thermal_profile(double t1, double t2, double t_1q, double t_2q,
                                    std::uint64_t shots, std::string name = "thermal") {
  if (shots < 1) throw config_error("profile: shots must be >= 1");
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw physicality_error("profile: T1 and T2 must be positive");
  if (t2 > 2.0 * t1) throw physicality_error("profile: T2 must not exceed 2*T1");
  if (!(t_1q > 0.0) || !(t_2q > 0.0))
    throw config_error("profile: gate durations must be positive");
  NoiseProfile p;
  p.kind = ProfileKind::Thermal;
  p.name = std::move(name);
  p.shots = shots;
  p.t1 = t1;
  p.t2 = t2;
  p.t_1q = t_1q;
  p.t_2q = t_2q;
  return p;
}

struct CostEstimate {
  double value = 0.0;
  std::uint64_t shots_used = 0;  // 0 denotes an exact expectation
  std::string profile;
};

/// Relaxation channel for one gate of the given duration: amplitude damping
/// with gamma = 1 - exp(-d/T1) composed with phase damping with
/// lambda = 1 - exp(-2d(1/T2 - 1/(2 T1))). Zero-probability branches are
/// dropped; the set stays complete to < 1e-12.
inline KrausSet thermal_kraus(double t1, double t2, double duration) {
  if (!(duration > 0.0)) throw usage_error("thermal_kraus: duration must be positive");
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw physicality_error("thermal_kraus: T1, T2 must be positive");
  if (t2 > 2.0 * t1) throw physicality_error("thermal_kraus: T2 must not exceed 2*T1");
  const double gamma = 1.0 - std::exp(-duration / t1);
  const double lambda = 1.0 - std::exp(-2.0 * duration * (1.0 / t2 - 1.0 / (2.0 * t1)));

  KrausSet ks;
  ks.duration = duration;
  CMat k0(2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt((1.0 - gamma) * (1.0 - lambda));
  ks.operators.push_back(std::move(k0));
  if (gamma > 0.0) {
    CMat k1(2);
    k1(0, 1) = std::sqrt(gamma);
    ks.operators.push_back(std::move(k1));
  }
  if (lambda > 0.0) {
    CMat k2(2);
    k2(1, 1) = std::sqrt(lambda * (1.0 - gamma));
    ks.operators.push_back(std::move(k2));
  }
  const double defect = completeness_defect(ks);
  if (defect > 1e-12)
    throw internal_error("thermal_kraus: completeness defect " + std::to_string(defect));
  return ks;
}

namespace detail {

/// Site channel with a fast path for the relaxation structure
/// {diag(1, s0), s1*|0><1|, diag(0, s2)}: every branch norm is an affine
/// function of the target qubit's excited population, so one real pass over
/// the amplitudes replaces three complex matrix-norm passes.
struct SiteChannel {
  const KrausSet* ks = nullptr;
  bool fast = false;
  double s0 = 1.0;  // K0(1,1)
  double s1 = 0.0;  // K1(0,1), 0 when the branch is absent
  double s2 = 0.0;  // K2(1,1), 0 when the branch is absent
};

inline SiteChannel analyze_site_channel(const KrausSet& ks) {
  SiteChannel ch;
  ch.ks = &ks;
  const auto real_entry = [](const CMat& m, int r, int c, double& out) {
    if (m(r, c).imag() != 0.0) return false;
    out = m(r, c).real();
    return true;
  };
  const std::size_t n = ks.operators.size();
  if (n < 1 || n > 3) return ch;
  const CMat& k0 = ks.operators[0];
  double one = 0.0;
  if (!real_entry(k0, 0, 0, one) || one != 1.0 || k0(0, 1) != cplx(0, 0) ||
      k0(1, 0) != cplx(0, 0) || !real_entry(k0, 1, 1, ch.s0))
    return ch;
  if (n >= 2) {
    const CMat& k1 = ks.operators[1];
    if (k1(0, 0) != cplx(0, 0) || k1(1, 0) != cplx(0, 0) || k1(1, 1) != cplx(0, 0) ||
        !real_entry(k1, 0, 1, ch.s1))
      return ch;
  }
  if (n == 3) {
    const CMat& k2 = ks.operators[2];
    if (k2(0, 0) != cplx(0, 0) || k2(0, 1) != cplx(0, 0) || k2(1, 0) != cplx(0, 0) ||
        !real_entry(k2, 1, 1, ch.s2))
      return ch;
  }
  if (!(ch.s0 > 0.0)) return ch;  // the fold by 1/s0 needs a nonzero no-jump branch
  ch.fast = true;
  return ch;
}

/// Excited-state population of `qubit` (sum of |a|^2 over set-bit indices).
inline double excited_mass(const StateVector& st, int qubit) {
  const std::uint64_t step = std::uint64_t(1) << qubit;
  const std::uint64_t n = st.amps.size();
  const cplx* amps = st.amps.data();
  double e = 0.0;
  for (std::uint64_t hi = 0; hi < n; hi += step << 1)
    for (std::uint64_t lo = hi; lo < hi + step; ++lo) e += std::norm(amps[lo + step]);
  return e;
}

/// Fused no-jump step of the relaxation structure: scales the set-bit
/// amplitudes by s0 and returns their pre-scaling population. Leaves the
/// state unnormalized; the caller tracks the norm analytically.
inline double scale_excited(StateVector& st, int qubit, double s0) {
  const std::uint64_t step = std::uint64_t(1) << qubit;
  const std::uint64_t n = st.amps.size();
  cplx* amps = st.amps.data();
  double e = 0.0;
  for (std::uint64_t hi = 0; hi < n; hi += step << 1)
    for (std::uint64_t lo = hi; lo < hi + step; ++lo) {
      e += std::norm(amps[lo + step]);
      amps[lo + step] *= s0;
    }
  return e;
}

inline void scale_state(StateVector& st, double factor) {
  for (auto& a : st.amps) a *= factor;
}

/// Raw branch norms ||K_i psi||^2 for a site.
inline void site_probs(const StateVector& st, int qubit, const SiteChannel& ch,
                       std::span<double> out) {
  if (!ch.fast) {
    kraus_branch_probs(st, qubit, *ch.ks, out);
    return;
  }
  const double total = norm_sqr(st);
  const double excited = excited_mass(st, qubit);
  const std::size_t nops = ch.ks->operators.size();
  out[0] = (total - excited) + ch.s0 * ch.s0 * excited;
  if (nops >= 2) out[1] = ch.s1 * ch.s1 * excited;
  if (nops == 3) out[2] = ch.s2 * ch.s2 * excited;
}

/// psi <- K_branch psi / sqrt(raw_prob).
inline void site_apply(StateVector& st, int qubit, const SiteChannel& ch, std::size_t branch,
                       double raw_prob) {
  if (!ch.fast) {
    apply_two_by_two(st, qubit, ch.ks->operators[branch], std::sqrt(raw_prob));
    return;
  }
  const double inv = 1.0 / std::sqrt(raw_prob);
  const std::uint64_t step = std::uint64_t(1) << qubit;
  const std::uint64_t n = st.amps.size();
  cplx* amps = st.amps.data();
  if (branch == 0) {
    const double c0 = inv, c1 = ch.s0 * inv;
    for (std::uint64_t hi = 0; hi < n; hi += step << 1)
      for (std::uint64_t lo = hi; lo < hi + step; ++lo) {
        amps[lo] *= c0;
        amps[lo + step] *= c1;
      }
  } else if (branch == 1) {
    const double g = ch.s1 * inv;
    for (std::uint64_t hi = 0; hi < n; hi += step << 1)
      for (std::uint64_t lo = hi; lo < hi + step; ++lo) {
        amps[lo] = g * amps[lo + step];
        amps[lo + step] = 0.0;
      }
  } else {
    const double s = ch.s2 * inv;
    for (std::uint64_t hi = 0; hi < n; hi += step << 1)
      for (std::uint64_t lo = hi; lo < hi + step; ++lo) {
        amps[lo] = 0.0;
        amps[lo + step] *= s;
      }
  }
}

/// Applies jump branch `b` (1 or 2) of a fast channel to a state that has
/// already absorbed the site's s0 scaling on its set-bit amplitudes, then
/// renormalizes. Folding 1/s0 into the jump coefficient makes the undo of
/// the no-jump scaling exact.
inline void apply_jump_from_scaled(StateVector& st, int qubit, const SiteChannel& ch,
                                   std::size_t branch) {
  const std::uint64_t step = std::uint64_t(1) << qubit;
  const std::uint64_t n = st.amps.size();
  cplx* amps = st.amps.data();
  double norm2 = 0.0;
  if (branch == 1) {
    const double g = ch.s1 / ch.s0;
    for (std::uint64_t hi = 0; hi < n; hi += step << 1)
      for (std::uint64_t lo = hi; lo < hi + step; ++lo) {
        amps[lo] = g * amps[lo + step];
        amps[lo + step] = 0.0;
        norm2 += std::norm(amps[lo]);
      }
  } else {
    const double s = ch.s2 / ch.s0;
    for (std::uint64_t hi = 0; hi < n; hi += step << 1)
      for (std::uint64_t lo = hi; lo < hi + step; ++lo) {
        amps[lo] = 0.0;
        amps[lo + step] *= s;
        norm2 += std::norm(amps[lo + step]);
      }
  }
  if (norm2 < 1e-300) throw internal_error("trajectory: jump onto a zero branch");
  scale_state(st, 1.0 / std::sqrt(norm2));
}

/// One step of a linearized noisy circuit execution.
struct ExecOp {
  enum class Kind : std::uint8_t { Phase, Gate, Site };
  Kind kind = Kind::Phase;
  int layer = 0;  // Phase: which layer's factor table
  const GateMatrix* gate = nullptr;
  std::array<int, 3> targets{};
  int arity = 0;
  int qubit = 0;       // Site
  int channel_id = 0;  // Site: 0 = one-qubit channel, 1 = two-qubit channel
};

/// Circuit plus per-gate relaxation sites and precomputed cost-phase factor
/// tables, ready for repeated trajectory execution.
struct ExecPlan {
  const CircuitPlan* plan = nullptr;
  std::span<const double> cost;
  std::vector<std::vector<cplx>> phase_factors;  // one table per layer
  SiteChannel channel_1q;
  SiteChannel channel_2q;
  std::vector<ExecOp> ops;
  int num_sites = 0;
};

inline ExecPlan linearize_with_noise(const CircuitPlan& plan, std::span<const double> cost,
                                     const KrausSet& kraus_1q, const KrausSet& kraus_2q) {
  ExecPlan ep;
  ep.plan = &plan;
  ep.cost = cost;
  ep.channel_1q = analyze_site_channel(kraus_1q);
  ep.channel_2q = analyze_site_channel(kraus_2q);
  for (std::size_t layer = 0; layer < plan.mixer_layers.size(); ++layer) {
    const double gamma = plan.layer_gammas[layer];
    std::vector<cplx> factors(cost.size());
    for (std::size_t j = 0; j < cost.size(); ++j) factors[j] = std::polar(1.0, -gamma * cost[j]);
    ep.phase_factors.push_back(std::move(factors));

    ExecOp phase;
    phase.kind = ExecOp::Kind::Phase;
    phase.layer = static_cast<int>(layer);
    ep.ops.push_back(phase);

    const MixerLayer& ml = plan.mixer_layers[layer];
    for (const GateApplication& app : ml.apps) {
      ExecOp g;
      g.kind = ExecOp::Kind::Gate;
      g.gate = app.uses_p ? &ml.p_gate : &ml.s_gate;
      g.targets = app.targets;
      g.arity = app.arity;
      ep.ops.push_back(g);
      // Relaxation on every participant for the gate's duration. All mixer
      // gates take the two-qubit time; a one-qubit gate would take t_1q.
      for (int j = 0; j < app.arity; ++j) {
        ExecOp s;
        s.kind = ExecOp::Kind::Site;
        s.qubit = app.targets[std::size_t(j)];
        s.channel_id = (app.arity == 1) ? 0 : 1;
        ep.ops.push_back(s);
        ++ep.num_sites;
      }
    }
  }
  return ep;
}

inline StateVector initial_state(const CircuitPlan& plan) {
  StateVector st = new_zero_state(plan.num_qubits);
  st.amps[0] = 0.0;
  st.amps[plan.initial_index] = 1.0;
  return st;
}

inline void apply_phase_table(StateVector& st, const std::vector<cplx>& factors) {
  for (std::size_t j = 0; j < st.amps.size(); ++j) st.amps[j] *= factors[j];
}

inline void apply_exec_gate(StateVector& st, const ExecOp& op) {
  apply_gate(st, std::span<const int>(op.targets.data(), std::size_t(op.arity)), *op.gate);
}

inline const SiteChannel& site_channel(const ExecPlan& ep, const ExecOp& op) {
  return op.channel_id == 0 ? ep.channel_1q : ep.channel_2q;
}

/// Draws one Kraus branch for a site from the per-branch norms and applies
/// it normalized. Consumes exactly one uniform.
inline void sample_site(StateVector& st, int qubit, const SiteChannel& ch, RngStream& rng) {
  std::array<double, 4> probs{};
  const std::size_t nops = ch.ks->operators.size();
  site_probs(st, qubit, ch, std::span<double>(probs.data(), nops));
  double total = 0.0;
  for (std::size_t i = 0; i < nops; ++i) total += probs[i];
  if (total < 1e-15) throw internal_error("trajectory: vanishing branch norms");
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t pick = nops - 1;
  for (std::size_t i = 0; i < nops; ++i) {
    acc += probs[i];
    if (u < acc) {
      pick = i;
      break;
    }
  }
  site_apply(st, qubit, ch, pick, probs[pick]);
}

/// Reference per-site sampler: every noise site draws a Kraus branch.
inline std::uint64_t run_trajectory_direct(const ExecPlan& ep, RngStream& rng) {
  StateVector st = initial_state(*ep.plan);
  for (const ExecOp& op : ep.ops) {
    switch (op.kind) {
      case ExecOp::Kind::Phase: apply_phase_table(st, ep.phase_factors[std::size_t(op.layer)]); break;
      case ExecOp::Kind::Gate: apply_exec_gate(st, op); break;
      case ExecOp::Kind::Site: sample_site(st, op.qubit, site_channel(ep, op), rng); break;
    }
  }
  const std::vector<double> cum = probability_cumulative(st);
  return sample_index(cum, rng);
}

/// Applies jump branch `b` (1 or 2) of a fast channel to the state *before*
/// the site's no-jump scaling, then renormalizes.
inline void apply_jump_pre_site(StateVector& st, int qubit, const SiteChannel& ch,
                                std::size_t branch) {
  const std::uint64_t step = std::uint64_t(1) << qubit;
  const std::uint64_t n = st.amps.size();
  cplx* amps = st.amps.data();
  double norm2 = 0.0;
  if (branch == 1) {
    for (std::uint64_t hi = 0; hi < n; hi += step << 1)
      for (std::uint64_t lo = hi; lo < hi + step; ++lo) {
        amps[lo] = ch.s1 * amps[lo + step];
        amps[lo + step] = 0.0;
        norm2 += std::norm(amps[lo]);
      }
  } else {
    for (std::uint64_t hi = 0; hi < n; hi += step << 1)
      for (std::uint64_t lo = hi; lo < hi + step; ++lo) {
        amps[lo] = 0.0;
        amps[lo + step] *= ch.s2;
        norm2 += std::norm(amps[lo + step]);
      }
  }
  if (norm2 < 1e-300) throw internal_error("trajectory: jump onto a zero branch");
  scale_state(st, 1.0 / std::sqrt(norm2));
}

/// Deterministic no-jump evolution of the plan, with everything needed to
/// sample trajectories by first-jump decomposition: per-site branch norms
/// (relative to the normalized state), the cumulative first-jump
/// distribution, periodic normalized checkpoints, and the final no-jump
/// measurement distribution. Fast-channel sites evolve unnormalized (only
/// the excited amplitudes are touched) with the norm tracked analytically.
struct NoJumpTrace {
  std::vector<std::array<double, 4>> site_raw;
  std::vector<std::size_t> site_nops;
  std::vector<double> jump_cum;  // P(first jump at site <= s)
  std::vector<std::pair<std::size_t, StateVector>> checkpoints;  // (op index, state before it)
  std::vector<std::size_t> checkpoint_site;                      // site index at that op
  std::vector<double> final_cum;
};

inline NoJumpTrace build_no_jump_trace(const ExecPlan& ep, std::size_t checkpoint_stride = 24) {
  NoJumpTrace tr;
  StateVector st = initial_state(*ep.plan);
  double survival = 1.0;
  double norm2 = 1.0;
  std::size_t site = 0;
  std::vector<double> probs;
  for (std::size_t op_idx = 0; op_idx < ep.ops.size(); ++op_idx) {
    const ExecOp& op = ep.ops[op_idx];
    switch (op.kind) {
      case ExecOp::Kind::Phase: apply_phase_table(st, ep.phase_factors[std::size_t(op.layer)]); break;
      case ExecOp::Kind::Gate: apply_exec_gate(st, op); break;
      case ExecOp::Kind::Site: {
        if (site % checkpoint_stride == 0) {
          StateVector snap = st;
          if (norm2 != 1.0) scale_state(snap, 1.0 / std::sqrt(norm2));
          tr.checkpoints.emplace_back(op_idx, std::move(snap));
          tr.checkpoint_site.push_back(site);
        }
        const SiteChannel& ch = site_channel(ep, op);
        const std::size_t nops = ch.ks->operators.size();
        std::array<double, 4> raw{};
        double p0 = 0.0;
        if (ch.fast) {
          const double pop = scale_excited(st, op.qubit, ch.s0) / norm2;
          raw[0] = 1.0 - (1.0 - ch.s0 * ch.s0) * pop;
          if (nops >= 2) raw[1] = ch.s1 * ch.s1 * pop;
          if (nops == 3) raw[2] = ch.s2 * ch.s2 * pop;
          norm2 *= raw[0];
          p0 = raw[0] / (raw[0] + raw[1] + raw[2]);
        } else {
          if (norm2 != 1.0) {
            scale_state(st, 1.0 / std::sqrt(norm2));
            norm2 = 1.0;
          }
          probs.assign(nops, 0.0);
          site_probs(st, op.qubit, ch, probs);
          double total = 0.0;
          for (double p : probs) total += p;
          if (total < 1e-15) throw internal_error("no-jump trace: vanishing branch norms");
          for (std::size_t i = 0; i < nops && i < 4; ++i) raw[i] = probs[i];
          site_apply(st, op.qubit, ch, 0, probs[0]);
          p0 = probs[0] / total;
        }
        tr.site_raw.push_back(raw);
        tr.site_nops.push_back(nops);
        survival *= p0;
        tr.jump_cum.push_back(1.0 - survival);
        ++site;
        break;
      }
    }
  }
  if (norm2 != 1.0) scale_state(st, 1.0 / std::sqrt(norm2));
  tr.final_cum = probability_cumulative(st);
  return tr;
}

/// Picks a jump branch index >= 1 with probability proportional to the raw
/// branch norms.
inline std::size_t pick_jump_branch(const std::array<double, 4>& raw, std::size_t nops,
                                    RngStream& rng) {
  double jump_mass = 0.0;
  for (std::size_t i = 1; i < nops; ++i) jump_mass += raw[i];
  const double v = rng.uniform() * jump_mass;
  double acc = 0.0;
  for (std::size_t i = 1; i < nops; ++i) {
    acc += raw[i];
    if (v < acc) return i;
  }
  return nops - 1;
}

/// One trajectory outcome via first-jump decomposition. Shots that stay on
/// the no-jump branch reuse the precomputed final distribution. A shot whose
/// first jump lands at site s replays (unnormalized, excited-amplitude
/// scaling only) from the nearest checkpoint, applies the jump, and samples
/// the remaining sites with the waiting-time algorithm: the running norm of
/// the unnormalized state equals the no-jump survival probability, so one
/// threshold draw covers a whole run of sites.
inline std::uint64_t run_trajectory_first_jump(const ExecPlan& ep, const NoJumpTrace& tr,
                                               RngStream& rng) {
  const double u = rng.uniform();
  if (tr.jump_cum.empty() || u >= tr.jump_cum.back())
    return sample_index(tr.final_cum, rng);

  const std::size_t jump_site = std::size_t(
      std::upper_bound(tr.jump_cum.begin(), tr.jump_cum.end(), u) - tr.jump_cum.begin());

  // Latest checkpoint at or before the jump site.
  std::size_t ck = 0;
  while (ck + 1 < tr.checkpoint_site.size() && tr.checkpoint_site[ck + 1] <= jump_site) ++ck;
  StateVector st = tr.checkpoints[ck].second;
  std::size_t site = tr.checkpoint_site[ck];
  std::size_t op_idx = tr.checkpoints[ck].first;

  bool jumped = false;
  double norm2 = 1.0;      // replay: norm of the unnormalized state; tail: survival
  double threshold = 0.0;  // waiting-time threshold (valid once jumped)
  for (; op_idx < ep.ops.size(); ++op_idx) {
    const ExecOp& op = ep.ops[op_idx];
    switch (op.kind) {
      case ExecOp::Kind::Phase: apply_phase_table(st, ep.phase_factors[std::size_t(op.layer)]); break;
      case ExecOp::Kind::Gate: apply_exec_gate(st, op); break;
      case ExecOp::Kind::Site: {
        const SiteChannel& ch = site_channel(ep, op);
        if (!jumped) {
          if (site < jump_site) {
            // Forced no-jump replay.
            if (ch.fast) {
              scale_excited(st, op.qubit, ch.s0);
              norm2 *= tr.site_raw[site][0];
            } else {
              if (norm2 != 1.0) {
                scale_state(st, 1.0 / std::sqrt(norm2));
                norm2 = 1.0;
              }
              site_apply(st, op.qubit, ch, 0, tr.site_raw[site][0]);
            }
          } else {
            const std::size_t pick = pick_jump_branch(tr.site_raw[site], tr.site_nops[site], rng);
            if (ch.fast) {
              apply_jump_pre_site(st, op.qubit, ch, pick);
            } else {
              if (norm2 != 1.0) scale_state(st, 1.0 / std::sqrt(norm2));
              site_apply(st, op.qubit, ch, pick, tr.site_raw[site][pick]);
            }
            jumped = true;
            norm2 = 1.0;
            threshold = rng.uniform();
          }
          ++site;
        } else if (ch.fast) {
          // Waiting-time step: scale the excited amplitudes, update the
          // survival product, and jump when it crosses the threshold.
          const double pop = scale_excited(st, op.qubit, ch.s0) / norm2;
          const double p0 = 1.0 - (1.0 - ch.s0 * ch.s0) * pop;
          norm2 *= p0;
          if (threshold >= norm2) {
            std::array<double, 4> raw{};
            raw[1] = ch.s1 * ch.s1 * pop;
            raw[2] = ch.s2 * ch.s2 * pop;
            const std::size_t pick = pick_jump_branch(raw, ch.ks->operators.size(), rng);
            apply_jump_from_scaled(st, op.qubit, ch, pick);
            norm2 = 1.0;
            threshold = rng.uniform();
          }
        } else {
          // Generic channel: renormalize, sample this site directly, and
          // restart the waiting-time process with a rescaled threshold.
          if (norm2 != 1.0) {
            scale_state(st, 1.0 / std::sqrt(norm2));
            threshold /= norm2;
            norm2 = 1.0;
          }
          sample_site(st, op.qubit, ch, rng);
        }
        break;
      }
    }
  }
  const std::vector<double> cum = probability_cumulative(st);
  return sample_index(cum, rng);
}

}  // namespace detail

enum class ThermalEngine { FirstJump, Direct };

/// Cost estimate for one parameter vector under a noise profile.
/// Noiseless: exact expectation. Sampling: multinomial sample of the exact
/// final distribution, mean of decoded costs. Thermal: per-shot quantum
/// trajectory with a relaxation channel on every gate participant for the
/// gate's duration, one measurement per trajectory. Shot s always draws
/// from rng.child(s), so results do not depend on evaluation order.
inline CostEstimate estimate_cost(const CircuitGeometry& geom, int m,
                                  std::span<const double> cost_values, const QaoaParams& params,
                                  const NoiseProfile& profile, const RngStream& rng,
                                  ThermalEngine engine = ThermalEngine::FirstJump) {
  const CircuitPlan plan = build_circuit_plan(geom, m, params);
  CostEstimate est;
  est.profile = profile.name;
  switch (profile.kind) {
    case ProfileKind::Noiseless: {
      const StateVector st = run_noiseless(plan, cost_values);
      est.value = expectation_of_diagonal(st, cost_values);
      est.shots_used = 0;
      break;
    }
    case ProfileKind::Sampling: {
      const StateVector st = run_noiseless(plan, cost_values);
      const std::vector<double> cum = probability_cumulative(st);
      double acc = 0.0;
      for (std::uint64_t s = 0; s < profile.shots; ++s) {
        RngStream sr = rng.child(s);
        acc += cost_values[sample_index(cum, sr)];
      }
      est.value = acc / double(profile.shots);
      est.shots_used = profile.shots;
      break;
    }
    case ProfileKind::Thermal: {
      const KrausSet kraus_1q = thermal_kraus(profile.t1, profile.t2, profile.t_1q);
      const KrausSet kraus_2q = thermal_kraus(profile.t1, profile.t2, profile.t_2q);
      const detail::ExecPlan ep = detail::linearize_with_noise(plan, cost_values, kraus_1q, kraus_2q);
      double acc = 0.0;
      if (engine == ThermalEngine::Direct) {
        for (std::uint64_t s = 0; s < profile.shots; ++s) {
          RngStream sr = rng.child(s);
          acc += cost_values[detail::run_trajectory_direct(ep, sr)];
        }
      } else {
        const detail::NoJumpTrace tr = detail::build_no_jump_trace(ep);
        for (std::uint64_t s = 0; s < profile.shots; ++s) {
          RngStream sr = rng.child(s);
          acc += cost_values[detail::run_trajectory_first_jump(ep, tr, sr)];
        }
      }
      est.value = acc / double(profile.shots);
      est.shots_used = profile.shots;
      break;
    }
  }
  return est;
}

inline CostEstimate estimate_cost(const CircuitGeometry& geom, const GmvpInstance& inst,
                                  const QaoaParams& params, const NoiseProfile& profile,
                                  const RngStream& rng,
                                  ThermalEngine engine = ThermalEngine::FirstJump) {
  const std::vector<double> cost = build_cost_table(inst);
  return estimate_cost(geom, inst.m, cost, params, profile, rng, engine);
}

/// Full parameterized evaluation of the ansatz under a profile; alias kept
/// so circuit-level call sites read naturally.
inline CostEstimate evaluate_circuit(const CircuitGeometry& geom, int m,
                                     std::span<const double> cost_values,
                                     const QaoaParams& params, const NoiseProfile& profile,
                                     const RngStream& rng) {
  return estimate_cost(geom, m, cost_values, params, profile, rng);
}

}  // namespace hcq
