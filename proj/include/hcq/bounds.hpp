// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <span>
#include <vector>

namespace hcq {

/// Closed box interval for one search dimension.
struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
};

inline void clip_to_bounds(std::span<double> x, std::span<const Bounds> b) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], b[i].lo, b[i].hi);
}

inline bool within_bounds(std::span<const double> x, std::span<const Bounds> b) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < b[i].lo || x[i] > b[i].hi) return false;
  return true;
}

}  // namespace hcq
