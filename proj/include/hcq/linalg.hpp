// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "hcq/error.hpp"

namespace hcq {

using cplx = std::complex<double>;

/// Small dense complex square matrix, row-major. Sized for gate work
/// (dimensions 2..8); nothing here assumes a dimension cap, though.
class CMat {
 public:
  CMat() = default;
  explicit CMat(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim) {}

  static CMat identity(int dim) {
    CMat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  int dim() const { return dim_; }
  cplx& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * dim_ + c]; }
  const cplx& operator()(int r, int c) const {
    return a_[static_cast<std::size_t>(r) * dim_ + c];
  }
  std::span<const cplx> data() const { return a_; }

  CMat& operator+=(const CMat& o) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  CMat& operator*=(cplx s) {
    for (auto& v : a_) v *= s;
    return *this;
  }

  friend CMat operator*(const CMat& a, const CMat& b) {
    CMat out(a.dim_);
    for (int r = 0; r < a.dim_; ++r)
      for (int k = 0; k < a.dim_; ++k) {
        const cplx arK = a(r, k);
        if (arK == 0.0) continue;
        for (int c = 0; c < a.dim_; ++c) out(r, c) += arK * b(k, c);
      }
    return out;
  }

 private:
  int dim_ = 0;
  std::vector<cplx> a_;
};

inline CMat dagger(const CMat& m) {
  CMat out(m.dim());
  for (int r = 0; r < m.dim(); ++r)
    for (int c = 0; c < m.dim(); ++c) out(c, r) = std::conj(m(r, c));
  return out;
}

inline double max_abs(const CMat& m) {
  double v = 0.0;
  for (const auto& x : m.data()) v = std::max(v, std::abs(x));
  return v;
}

/// ‖M†M − I‖_max
inline double unitarity_defect(const CMat& m) {
  CMat p = dagger(m) * m;
  for (int i = 0; i < p.dim(); ++i) p(i, i) -= 1.0;
  return max_abs(p);
}

/// ‖M − M†‖_max
inline double hermiticity_defect(const CMat& m) {
  double v = 0.0;
  for (int r = 0; r < m.dim(); ++r)
    for (int c = 0; c < m.dim(); ++c) v = std::max(v, std::abs(m(r, c) - std::conj(m(c, r))));
  return v;
}

enum class Pauli { I, X, Y, Z };

inline cplx pauli_entry(Pauli p, int r, int c) {
  switch (p) {
    case Pauli::I: return r == c ? cplx(1, 0) : cplx(0, 0);
    case Pauli::X: return r != c ? cplx(1, 0) : cplx(0, 0);
    case Pauli::Y:
      if (r == c) return {0, 0};
      return r == 1 ? cplx(0, 1) : cplx(0, -1);
    case Pauli::Z: return r == c ? cplx(r == 0 ? 1 : -1, 0) : cplx(0, 0);
  }
  return {0, 0};
}

/// Tensor product of single-qubit Paulis, one factor per local qubit slot.
/// Local basis convention: bit j of the row/column index is slot j, matching
/// how apply_gate maps slot j to the j-th listed target qubit.
inline CMat pauli_product(std::initializer_list<Pauli> slots) {
  const int k = static_cast<int>(slots.size());
  const int dim = 1 << k;
  CMat m(dim);
  const Pauli* f = slots.begin();
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      cplx v = 1.0;
      for (int j = 0; j < k && v != 0.0; ++j) v *= pauli_entry(f[j], (r >> j) & 1, (c >> j) & 1);
      m(r, c) = v;
    }
  return m;
}

/// exp(A) by scaling-and-squaring over a Taylor series; the series stops when
/// a term's max entry drops below 1e-15.
inline CMat expm(const CMat& a) {
  int squarings = 0;
  double scale = max_abs(a);
  while (scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  CMat b = a;
  b *= std::pow(2.0, -squarings);

  CMat result = CMat::identity(a.dim());
  CMat term = CMat::identity(a.dim());
  for (int k = 1; k <= 64; ++k) {
    term = term * b;
    term *= cplx(1.0 / k, 0.0);
    result += term;
    if (max_abs(term) < 1e-15) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

}  // namespace hcq
