// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hcq/bounds.hpp"
#include "hcq/error.hpp"
#include "hcq/rng.hpp"

namespace hcq {

/// Bounded objective with an exact evaluation counter. Every evaluate() call
/// increments the counter by one, including exploratory and repair points,
/// and rejects out-of-bounds arguments.
class Objective {
 public:
  Objective(std::vector<Bounds> bounds, std::function<double(std::span<const double>)> fn)
      : bounds_(std::move(bounds)), fn_(std::move(fn)) {}

  int arity() const { return static_cast<int>(bounds_.size()); }
  const std::vector<Bounds>& bounds() const { return bounds_; }
  long eval_count() const { return count_; }

  double evaluate(std::span<const double> x) {
    if (static_cast<int>(x.size()) != arity())
      throw usage_error("objective: argument arity mismatch");
    if (!within_bounds(x, bounds_))
      throw usage_error("objective: point evaluated outside bounds");
    ++count_;
    return fn_(x);
  }

 private:
  std::vector<Bounds> bounds_;
  std::function<double(std::span<const double>)> fn_;
  long count_ = 0;
};

enum class Termination { converged, budget_exhausted };

struct OptResult {
  std::vector<double> best_x;
  double best_value = std::numeric_limits<double>::infinity();
  long nfev = 0;
  Termination termination = Termination::converged;
};

/// Partition of parameter indices into fixed (index, value) pairs and the
/// ordered free remainder.
struct ParamMask {
  std::vector<std::pair<int, double>> fixed;  // sorted by index
  std::vector<int> free_indices;              // ascending
};

inline ParamMask make_mask(int total, std::vector<std::pair<int, double>> fixed) {
  std::sort(fixed.begin(), fixed.end());
  std::vector<bool> is_fixed(std::size_t(total), false);
  for (auto [i, v] : fixed) {
    (void)v;
    if (i < 0 || i >= total) throw usage_error("mask: fixed index out of range");
    if (is_fixed[std::size_t(i)]) throw usage_error("mask: duplicate fixed index");
    is_fixed[std::size_t(i)] = true;
  }
  ParamMask m;
  m.fixed = std::move(fixed);
  for (int i = 0; i < total; ++i)
    if (!is_fixed[std::size_t(i)]) m.free_indices.push_back(i);
  return m;
}

inline std::vector<double> expand_mask(const ParamMask& mask, std::span<const double> free_vals) {
  if (free_vals.size() != mask.free_indices.size())
    throw usage_error("mask: free value arity mismatch");
  std::vector<double> full(mask.fixed.size() + mask.free_indices.size());
  for (auto [i, v] : mask.fixed) full[std::size_t(i)] = v;
  for (std::size_t k = 0; k < mask.free_indices.size(); ++k)
    full[std::size_t(mask.free_indices[k])] = free_vals[k];
  return full;
}

/// Objective over the free indices only: fixed components are inserted
/// verbatim on every call and the delegated base evaluation is counted
/// exactly once per call.
inline Objective masked_objective(const ParamMask& mask, Objective& base) {
  std::vector<Bounds> b;
  for (int i : mask.free_indices) b.push_back(base.bounds()[std::size_t(i)]);
  return Objective(std::move(b), [&base, mask](std::span<const double> free_vals) {
    const std::vector<double> full = expand_mask(mask, free_vals);
    return base.evaluate(full);
  });
}

namespace detail {

struct BudgetExhausted {};

/// Budget- and incumbent-tracking wrapper shared by the three optimizers.
class TrackedObjective {
 public:
  TrackedObjective(Objective& obj, long maxfev) : obj_(obj), maxfev_(maxfev), start_(obj.eval_count()) {}

  double operator()(std::span<const double> x) {
    if (used() >= maxfev_) throw BudgetExhausted{};
    const double f = obj_.evaluate(x);
    if (f < best_.best_value) {
      best_.best_value = f;
      best_.best_x.assign(x.begin(), x.end());
    }
    return f;
  }

  long used() const { return obj_.eval_count() - start_; }
  OptResult take(Termination term) {
    best_.nfev = used();
    best_.termination = term;
    return std::move(best_);
  }

 private:
  Objective& obj_;
  long maxfev_;
  long start_;
  OptResult best_;
};

/// Brent scalar minimization (golden section + parabolic interpolation) of
/// phi over [a, b]. `tol` is the fractional position precision.
template <typename Phi>
double brent_min(Phi&& phi, double a, double b, double tol, double* fmin_out = nullptr) {
  constexpr double kGold = 0.3819660112501051;
  constexpr int kMaxIter = 120;
  double x = a + kGold * (b - a), w = x, v = x;
  double fx = phi(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    const double xm = 0.5 * (a + b);
    const double tol1 = tol * std::abs(x) + 1e-12;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;
    bool golden = true;
    if (std::abs(e) > tol1) {
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = std::copysign(tol1, xm - x);
        golden = false;
      }
    }
    if (golden) {
      e = (x >= xm) ? a - x : b - x;
      d = kGold * e;
    }
    const double u = (std::abs(d) >= tol1) ? x + d : x + std::copysign(tol1, d);
    const double fu = phi(u);
    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; w = x; x = u;
      fv = fw; fw = fx; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; w = u;
        fv = fw; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  if (fmin_out) *fmin_out = fx;
  return x;
}

/// Step of the projected-gradient path d(tau) = clip(x - tau*g) - x with
/// ||d|| = rho (or the saturated endpoint when the whole path stays inside
/// the radius). ||d(tau)|| is nondecreasing in tau, so bisection applies.
inline std::vector<double> box_ball_step(std::span<const double> x, std::span<const double> g,
                                         double rho, std::span<const Bounds> bounds) {
  const std::size_t n = x.size();
  const auto path = [&](double tau, std::vector<double>& d) {
    double nrm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = std::clamp(x[i] - tau * g[i], bounds[i].lo, bounds[i].hi);
      d[i] = xi - x[i];
      nrm2 += d[i] * d[i];
    }
    return std::sqrt(nrm2);
  };
  double gnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) gnorm += g[i] * g[i];
  gnorm = std::sqrt(gnorm);
  std::vector<double> d(n, 0.0);
  if (gnorm == 0.0) return d;

  double hi = rho / gnorm;
  double len = path(hi, d);
  int doublings = 0;
  while (len < rho && doublings < 64) {
    const double prev = len;
    hi *= 2.0;
    len = path(hi, d);
    ++doublings;
    if (len <= prev * (1.0 + 1e-15)) return d;  // saturated inside the ball
  }
  if (len <= rho) return d;
  double lo = 0.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (path(mid, d) < rho) lo = mid; else hi = mid;
  }
  path(hi, d);
  return d;
}

/// Solves D g = df by Gaussian elimination with partial pivoting.
/// Returns false when the system is numerically singular.
inline bool solve_linear(std::vector<double> a, std::vector<double> rhs, int n,
                         std::vector<double>& out) {
  double amax = 0.0;
  for (double v : a) amax = std::max(amax, std::abs(v));
  const double tiny = amax * 1e-13 + 1e-300;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(a[std::size_t(col) * n + col]);
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(a[std::size_t(r) * n + col]);
      if (v > best) { best = v; piv = r; }
    }
    if (best < tiny) return false;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a[std::size_t(piv) * n + c], a[std::size_t(col) * n + c]);
      std::swap(rhs[std::size_t(piv)], rhs[std::size_t(col)]);
    }
    const double d = a[std::size_t(col) * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double f = a[std::size_t(r) * n + col] / d;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[std::size_t(r) * n + c] -= f * a[std::size_t(col) * n + c];
      rhs[std::size_t(r)] -= f * rhs[std::size_t(col)];
    }
  }
  out.assign(std::size_t(n), 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = rhs[std::size_t(r)];
    for (int c = r + 1; c < n; ++c) s -= a[std::size_t(r) * n + c] * out[std::size_t(c)];
    out[std::size_t(r)] = s / a[std::size_t(r) * n + r];
  }
  return true;
}

}  // namespace detail

/// Linear-approximation trust-region search: keeps a simplex of n+1
/// interpolation points, fits a linear model of the objective, and takes
/// steps minimizing the model inside {||d|| <= rho} ∩ bounds (the bound
/// constraints are linear, so their models are exact). rho shrinks from
/// rho_beg to rho_end; fully deterministic.
inline OptResult minimize_cobyla(Objective& obj, std::span<const double> x0, double rho_beg,
                                 double rho_end, long maxfev) {
  const int n = obj.arity();
  if (!(rho_end > 0.0) || !(rho_beg > rho_end))
    throw usage_error("cobyla: need 0 < rho_end < rho_beg");
  if (maxfev < n + 2) throw budget_error("cobyla: maxfev must be at least arity + 2");
  if (!within_bounds(x0, obj.bounds()))
    throw usage_error("cobyla: x0 outside bounds");
  const auto& bounds = obj.bounds();

  detail::TrackedObjective f(obj, maxfev);
  std::vector<std::vector<double>> pts(std::size_t(n) + 1);
  std::vector<double> fvals(std::size_t(n) + 1);

  // Rebuilds the offset vertices around a center whose value is known.
  // Vertex i+1 offsets the i-th coordinate by +rho, flipped when that would
  // leave the box.
  const auto build_simplex = [&](std::vector<double> center, double f_center, double rho) {
    pts[0] = std::move(center);
    fvals[0] = f_center;
    for (int i = 0; i < n; ++i) {
      std::vector<double> p = pts[0];
      const double room_up = bounds[std::size_t(i)].hi - p[std::size_t(i)];
      const double room_dn = p[std::size_t(i)] - bounds[std::size_t(i)].lo;
      double step = (room_up >= rho) ? rho : (room_dn >= rho ? -rho : (room_up >= room_dn ? room_up : -room_dn));
      if (step == 0.0) step = room_up > 0 ? room_up : -room_dn;
      p[std::size_t(i)] += step;
      pts[std::size_t(i) + 1] = p;
      fvals[std::size_t(i) + 1] = f(p);
    }
  };

  double rho = rho_beg;
  Termination term = Termination::converged;
  try {
    const std::vector<double> start(x0.begin(), x0.end());
    build_simplex(start, f(start), rho);
    // At each radius level: trust steps while they pay off, at most one
    // geometry rebuild on a stall, and a second stall shrinks rho. This
    // bounds the per-level cost and cannot cycle.
    bool rebuilt_this_level = false;
    while (true) {
      // Best vertex to slot 0.
      int best = 0;
      for (int i = 1; i <= n; ++i)
        if (fvals[std::size_t(i)] < fvals[std::size_t(best)]) best = i;
      if (best != 0) {
        std::swap(pts[0], pts[std::size_t(best)]);
        std::swap(fvals[0], fvals[std::size_t(best)]);
      }

      // Linear model gradient from the interpolation conditions.
      std::vector<double> dmat(std::size_t(n) * n), rhs(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        for (int c = 0; c < n; ++c)
          dmat[std::size_t(i) * n + c] = pts[std::size_t(i) + 1][std::size_t(c)] - pts[0][std::size_t(c)];
        rhs[std::size_t(i)] = fvals[std::size_t(i) + 1] - fvals[0];
      }
      std::vector<double> grad;
      const bool solvable = detail::solve_linear(dmat, rhs, n, grad);

      bool progressed = false;
      if (solvable) {
        const std::vector<double> d = detail::box_ball_step(pts[0], grad, rho, bounds);
        double pred = 0.0, dlen = 0.0;
        for (int i = 0; i < n; ++i) {
          pred -= grad[std::size_t(i)] * d[std::size_t(i)];
          dlen += d[std::size_t(i)] * d[std::size_t(i)];
        }
        dlen = std::sqrt(dlen);
        if (pred > 0.0 && dlen > 0.05 * rho) {
          std::vector<double> xnew(pts[0]);
          for (int i = 0; i < n; ++i) xnew[std::size_t(i)] += d[std::size_t(i)];
          clip_to_bounds(xnew, bounds);
          const double fnew = f(xnew);
          // Replace the worst vertex when the new point beats it.
          int worst = 0;
          for (int i = 1; i <= n; ++i)
            if (fvals[std::size_t(i)] > fvals[std::size_t(worst)]) worst = i;
          if (fnew < fvals[std::size_t(worst)]) {
            pts[std::size_t(worst)] = std::move(xnew);
            fvals[std::size_t(worst)] = fnew;
          }
          progressed = fnew < fvals[0] - 0.1 * pred;
        }
      }

      if (!progressed) {
        if (!rebuilt_this_level) {
          // A walk leaves trailing vertices behind; one rebuild around the
          // incumbent restores the model before giving up on this radius.
          build_simplex(pts[0], fvals[0], rho);
          rebuilt_this_level = true;
        } else {
          rho *= 0.5;
          if (rho <= rho_end) break;  // converged
          rebuilt_this_level = false;
        }
      }
    }
  } catch (const detail::BudgetExhausted&) {
    term = Termination::budget_exhausted;
  }
  return f.take(term);
}

/// Conjugate-direction search: cycles through a direction set with bounded
/// Brent line minimization, replacing the direction of largest decrease when
/// the extrapolation test passes. Terminates when a full cycle improves by
/// less than ftol*(|f|+ftol) or the budget runs out. Deterministic.
inline OptResult minimize_powell(Objective& obj, std::span<const double> x0, double xtol,
                                 double ftol, long maxfev) {
  const int n = obj.arity();
  if (maxfev < n + 2) throw budget_error("powell: maxfev must be at least arity + 2");
  if (!within_bounds(x0, obj.bounds())) throw usage_error("powell: x0 outside bounds");
  const auto& bounds = obj.bounds();

  detail::TrackedObjective f(obj, maxfev);
  std::vector<std::vector<double>> dirs(std::size_t(n), std::vector<double>(std::size_t(n), 0.0));
  for (int i = 0; i < n; ++i) dirs[std::size_t(i)][std::size_t(i)] = 1.0;

  std::vector<double> p(x0.begin(), x0.end());
  Termination term = Termination::converged;

  // Line minimization along u from p, restricted to the box.
  const auto linmin = [&](std::vector<double>& point, std::span<const double> u, double fcur) {
    double alo = -std::numeric_limits<double>::infinity();
    double ahi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (u[std::size_t(i)] > 0.0) {
        ahi = std::min(ahi, (bounds[std::size_t(i)].hi - point[std::size_t(i)]) / u[std::size_t(i)]);
        alo = std::max(alo, (bounds[std::size_t(i)].lo - point[std::size_t(i)]) / u[std::size_t(i)]);
      } else if (u[std::size_t(i)] < 0.0) {
        ahi = std::min(ahi, (bounds[std::size_t(i)].lo - point[std::size_t(i)]) / u[std::size_t(i)]);
        alo = std::max(alo, (bounds[std::size_t(i)].hi - point[std::size_t(i)]) / u[std::size_t(i)]);
      }
    }
    if (!(ahi > alo)) return fcur;
    std::vector<double> trial(static_cast<std::size_t>(n));
    const auto phi = [&](double alpha) {
      for (int i = 0; i < n; ++i)
        trial[std::size_t(i)] = std::clamp(point[std::size_t(i)] + alpha * u[std::size_t(i)],
                                           bounds[std::size_t(i)].lo, bounds[std::size_t(i)].hi);
      return f(trial);
    };
    double fmin = fcur;
    const double alpha = detail::brent_min(phi, alo, ahi, std::max(xtol, 1e-11), &fmin);
    if (fmin < fcur) {
      for (int i = 0; i < n; ++i)
        point[std::size_t(i)] = std::clamp(point[std::size_t(i)] + alpha * u[std::size_t(i)],
                                           bounds[std::size_t(i)].lo, bounds[std::size_t(i)].hi);
      return fmin;
    }
    return fcur;
  };

  try {
    double fp = f(p);
    while (true) {
      const double f_start = fp;
      const std::vector<double> p_start = p;
      double biggest_drop = 0.0;
      std::size_t ibig = 0;
      for (std::size_t i = 0; i < dirs.size(); ++i) {
        const double before = fp;
        fp = linmin(p, dirs[i], fp);
        if (before - fp > biggest_drop) {
          biggest_drop = before - fp;
          ibig = i;
        }
      }
      if (2.0 * (f_start - fp) <= ftol * (std::abs(f_start) + std::abs(fp)) + 1e-25) break;

      // Powell's replacement test on the extrapolated point.
      std::vector<double> extrap(static_cast<std::size_t>(n));
      bool inside = true;
      for (int i = 0; i < n; ++i) {
        extrap[std::size_t(i)] = 2.0 * p[std::size_t(i)] - p_start[std::size_t(i)];
        if (extrap[std::size_t(i)] < bounds[std::size_t(i)].lo ||
            extrap[std::size_t(i)] > bounds[std::size_t(i)].hi)
          inside = false;
      }
      if (!inside) continue;
      const double fe = f(extrap);
      if (fe < f_start) {
        const double t = 2.0 * (f_start - 2.0 * fp + fe) *
                             (f_start - fp - biggest_drop) * (f_start - fp - biggest_drop) -
                         biggest_drop * (f_start - fe) * (f_start - fe);
        if (t < 0.0) {
          std::vector<double> unew(static_cast<std::size_t>(n));
          double nrm = 0.0;
          for (int i = 0; i < n; ++i) {
            unew[std::size_t(i)] = p[std::size_t(i)] - p_start[std::size_t(i)];
            nrm += unew[std::size_t(i)] * unew[std::size_t(i)];
          }
          if (nrm > 0.0) {
            fp = linmin(p, unew, fp);
            dirs[ibig] = dirs.back();
            dirs.back() = std::move(unew);
          }
        }
      }
    }
  } catch (const detail::BudgetExhausted&) {
    term = Termination::budget_exhausted;
  }
  return f.take(term);
}

struct DualAnnealingOptions {
  double q_v = 2.62;
  double q_a = -5.0;
  double t0 = 5230.0;
  long maxfev = 2000;
  bool local_polish = true;
  double restart_temp_ratio = 2e-5;
};

namespace detail {

/// Heavy-tailed visiting distribution of generalized simulated annealing,
/// sampled through the two-normal construction.
class TsallisVisit {
 public:
  TsallisVisit(double qv) : qv_(qv) {
    const double pi = 3.14159265358979323846;
    factor2_ = std::exp((4.0 - qv) * std::log(qv - 1.0));
    factor3_ = std::exp((2.0 - qv) * std::log(2.0) / (qv - 1.0));
    factor4p_ = std::sqrt(pi) * factor2_ / (factor3_ * (3.0 - qv));
    factor5_ = 1.0 / (qv - 1.0) - 0.5;
    const double d1 = 2.0 - factor5_;
    factor6_ = pi * (1.0 - factor5_) / std::sin(pi * (1.0 - factor5_)) / std::exp(std::lgamma(d1));
  }

  double sample(double temperature, RngStream& rng) const {
    const double factor1 = std::exp(std::log(temperature) / (qv_ - 1.0));
    const double factor4 = factor4p_ * factor1;
    const double x = rng.normal() *
                     std::exp(-(qv_ - 1.0) * std::log(factor6_ / factor4) / (3.0 - qv_));
    const double y = rng.normal();
    const double den = std::exp((qv_ - 1.0) * std::log(std::abs(y)) / (3.0 - qv_));
    double visit = x / den;
    constexpr double kTail = 1e8;
    if (visit > kTail) visit = kTail * rng.uniform();
    else if (visit < -kTail) visit = -kTail * rng.uniform();
    return visit;
  }

 private:
  double qv_, factor2_, factor3_, factor4p_, factor5_, factor6_;
};

inline double wrap_into(double v, const Bounds& b) {
  const double range = b.hi - b.lo;
  double a = std::fmod(v - b.lo, range) + range;
  double out = std::fmod(a, range) + b.lo;
  if (std::abs(out - b.lo) < 1e-10) out += 1e-10;
  return std::clamp(out, b.lo, b.hi);
}

}  // namespace detail

/// Generalized simulated annealing: Tsallis visiting jumps with parameter
/// q_v, acceptance with parameter q_a on the cooling schedule from t0,
/// re-annealing restarts, and an optional Powell polish of the incumbent
/// within the same evaluation budget. Seeded and reproducible.
inline OptResult minimize_dual_annealing(Objective& obj, std::uint64_t seed,
                                         const DualAnnealingOptions& opt) {
  const int n = obj.arity();
  if (opt.maxfev < n + 2) throw budget_error("dual_annealing: maxfev must be at least arity + 2");
  const auto& bounds = obj.bounds();
  for (const Bounds& b : bounds)
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.hi > b.lo))
      throw usage_error("dual_annealing: bounds must be finite nonempty intervals");

  RngStream rng = RngStream(seed);
  detail::TrackedObjective f(obj, opt.maxfev);
  detail::TsallisVisit visit(opt.q_v);

  const long polish_budget = opt.local_polish ? std::max<long>(3 * (n + 2), opt.maxfev / 8) : 0;
  const long anneal_budget = std::max<long>(n + 2, opt.maxfev - polish_budget);

  std::vector<double> cur(static_cast<std::size_t>(n)), cand(static_cast<std::size_t>(n)), best_x;
  double fcur = 0.0;
  const auto random_start = [&] {
    for (int i = 0; i < n; ++i)
      cur[std::size_t(i)] = rng.uniform_in(bounds[std::size_t(i)].lo, bounds[std::size_t(i)].hi);
    fcur = f(cur);
  };

  Termination term = Termination::converged;
  try {
    random_start();
    const double t1 = std::exp((opt.q_v - 1.0) * std::log(2.0)) - 1.0;
    long step = 0;
    while (true) {
      if (f.used() >= anneal_budget) break;
      const double temperature =
          opt.t0 * t1 / (std::exp((opt.q_v - 1.0) * std::log(double(step) + 2.0)) - 1.0);
      if (temperature < opt.restart_temp_ratio * opt.t0) {
        random_start();
        step = 0;
        continue;
      }
      const double t_step = temperature / double(step + 1);
      for (int j = 0; j < 2 * n && f.used() < anneal_budget; ++j) {
        cand = cur;
        if (j < n) {
          for (int i = 0; i < n; ++i)
            cand[std::size_t(i)] = detail::wrap_into(
                cur[std::size_t(i)] + visit.sample(temperature, rng), bounds[std::size_t(i)]);
        } else {
          const int i = j - n;
          cand[std::size_t(i)] = detail::wrap_into(
              cur[std::size_t(i)] + visit.sample(temperature, rng), bounds[std::size_t(i)]);
        }
        const double fc = f(cand);
        if (fc < fcur) {
          cur = cand;
          fcur = fc;
        } else {
          const double r = rng.uniform();
          const double pqa = 1.0 - (1.0 - opt.q_a) * (fc - fcur) / t_step;
          if (pqa > 0.0 && r <= std::exp(std::log(pqa) / (1.0 - opt.q_a))) {
            cur = cand;
            fcur = fc;
          }
        }
      }
      ++step;
    }
  } catch (const detail::BudgetExhausted&) {
    term = Termination::budget_exhausted;
  }

  OptResult annealed = f.take(term);
  if (opt.local_polish && annealed.nfev < opt.maxfev && !annealed.best_x.empty()) {
    OptResult polished = minimize_powell(obj, annealed.best_x, 1e-8, 1e-10,
                                         opt.maxfev - annealed.nfev);
    if (polished.best_value < annealed.best_value) {
      annealed.best_x = polished.best_x;
      annealed.best_value = polished.best_value;
    }
    annealed.nfev += polished.nfev;
    if (annealed.nfev >= opt.maxfev) annealed.termination = Termination::budget_exhausted;
  }
  return annealed;
}

}  // namespace hcq
