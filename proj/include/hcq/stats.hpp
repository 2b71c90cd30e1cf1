// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <span>
#include <utility>

#include "hcq/error.hpp"

namespace hcq {

inline double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / double(xs.size());
}

/// Sample standard deviation (N-1 denominator).
inline double sample_std(std::span<const double> xs) {
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / double(xs.size() - 1));
}

namespace detail {

/// Continued fraction for the regularized incomplete beta (Lentz).
inline double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::betacf(a, b, x) / a;
  return 1.0 - front * detail::betacf(b, a, 1.0 - x) / b;
}

/// CDF of Student's t with `dof` degrees of freedom.
inline double student_t_cdf(double t, int dof) {
  const double v = double(dof);
  const double ib = incomplete_beta(0.5 * v, 0.5, v / (v + t * t));
  return t >= 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

/// Two-sided 95% quantile t_{0.975, dof} by bisection on the CDF.
inline double student_t_975(int dof) {
  if (dof < 1) throw usage_error("student_t_975: dof must be >= 1");
  double lo = 0.0, hi = 1024.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_cdf(mid, dof) < 0.975) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// mean ± t_{0.975, N-1} * s / sqrt(N)
inline std::pair<double, double> ci95(std::span<const double> samples) {
  if (samples.size() < 2) throw usage_error("ci95: need at least 2 samples");
  const double m = mean(samples);
  const double s = sample_std(samples);
  const double half = student_t_975(int(samples.size()) - 1) * s / std::sqrt(double(samples.size()));
  return {m - half, m + half};
}

}  // namespace hcq
