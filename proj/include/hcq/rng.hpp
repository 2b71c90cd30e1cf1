// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hcq {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Deterministic combiner for deriving child-stream seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s ^= (index + 0x9e3779b97f4a7c15ull) * 0xff51afd7ed558ccdull;
  h ^= splitmix64(s);
  return h;
}

}  // namespace detail

/// Seeded random stream with deterministic child-stream derivation.
///
/// Identical seeds produce bit-identical sample sequences. A child stream is
/// a pure function of (parent seed, index), so independent tasks (shots,
/// grid cells, benchmark runs) can draw from decorrelated streams whose
/// output does not depend on scheduling order.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed)
      : seed_(seed), engine_(detail::mix_seed(seed, 0x5eed)) {}

  std::uint64_t seed() const { return seed_; }

  RngStream child(std::uint64_t index) const {
    return RngStream(detail::mix_seed(seed_, index));
  }

  RngStream child(std::uint64_t a, std::uint64_t b) const {
    return RngStream(detail::mix_seed(detail::mix_seed(seed_, a), b));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53 significant bits.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double uniform_pos() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

  double uniform_in(double lo, double hi) { return lo + uniform() * (hi - lo); }

  /// Uniform integer in [0, n); multiply-shift reduction.
  std::uint64_t uniform_index(std::uint64_t n) {
    return std::uint64_t((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Standard normal via Box-Muller (two uniforms, no rejection), so the
  /// draw count per call is fixed and platform-independent.
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace hcq
