#pragma once

#include <cstddef>
#include <numeric>
#include <optional>
#include <type_traits>
#include <string>
#include <utility>
#include <vector>

#include "blockdet/error.hpp"
#include "blockdet/matrix.hpp"
#include "blockdet/scalar.hpp"

namespace blockdet {

/// Largest order accepted by the Ryser kernels unless the caller overrides it.
inline constexpr std::size_t kRyserDefaultCap = 30;
/// Largest order accepted by the permutation-expansion oracles.
inline constexpr std::size_t kNaiveCap = 9;

// Dense kernels. The functions in this namespace are the OpenMP versions; the
// single-threaded reference implementations live in blockdet::serial and must
// return identical exact results.

/// Fraction-free Gaussian elimination with row pivoting. 0x0 -> 1.
Integer det_bareiss(const Matrix<Integer>& m);
/// Clears row denominators, then runs the integer elimination.
Rational det_bareiss(const Matrix<Rational>& m);

/// Partial-pivoting LU; a zero pivot column gives exactly 0.
double det_lu(const Matrix<double>& m);

/// Ryser inclusion-exclusion over column subsets in Gray-code order.
/// Throws ResourceError when the order exceeds `cap`.
Integer per_ryser(const Matrix<Integer>& m, std::size_t cap = kRyserDefaultCap);
Rational per_ryser(const Matrix<Rational>& m, std::size_t cap = kRyserDefaultCap);
double per_ryser(const Matrix<double>& m, std::size_t cap = kRyserDefaultCap);

namespace serial {
Integer det_bareiss(const Matrix<Integer>& m);
Integer per_ryser(const Matrix<Integer>& m, std::size_t cap = kRyserDefaultCap);
double per_ryser(const Matrix<double>& m, std::size_t cap = kRyserDefaultCap);
}  // namespace serial

inline Integer det_dense(const Matrix<Integer>& m) { return det_bareiss(m); }
inline Rational det_dense(const Matrix<Rational>& m) { return det_bareiss(m); }
inline double det_dense(const Matrix<double>& m) { return det_lu(m); }

template <class T>
T per_dense(const Matrix<T>& m, std::size_t cap = kRyserDefaultCap) {
  return per_ryser(m, cap);
}

namespace detail {

// Visits every permutation of 0..n-1 (Heap's algorithm) with its sign.
template <class Visit>
void for_each_permutation(std::size_t n, Visit&& visit) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::size_t> counter(n, 0);
  int sign = 1;
  visit(perm, sign);
  std::size_t i = 1;
  while (i < n) {
    if (counter[i] < i) {
      std::swap(perm[i % 2 == 0 ? 0 : counter[i]], perm[i]);
      sign = -sign;
      visit(perm, sign);
      ++counter[i];
      i = 1;
    } else {
      counter[i] = 0;
      ++i;
    }
  }
}

template <class T>
T permutation_expansion(const Matrix<T>& m, bool signed_sum) {
  const std::size_t n = m.order();
  if (n > kNaiveCap)
    throw ResourceError("permutation expansion is capped at order " + std::to_string(kNaiveCap) +
                        ", got " + std::to_string(n));
  T total(0);
  for_each_permutation(n, [&](const std::vector<std::size_t>& perm, int sign) {
    T product(1);
    for (std::size_t r = 0; r < n; ++r) {
      product *= m(r, perm[r]);
      if (is_zero(product)) return;
    }
    if (signed_sum && sign < 0)
      total -= product;
    else
      total += product;
  });
  return total;
}

}  // namespace detail

/// Sum over all permutations of sgn(p) * prod a_{i,p(i)}. Oracle only; order <= 9.
template <class T>
T det_naive(const Matrix<T>& m) {
  return detail::permutation_expansion(m, true);
}

/// Sum over all permutations of prod a_{i,p(i)}. Oracle only; order <= 9.
template <class T>
T per_naive(const Matrix<T>& m) {
  return detail::permutation_expansion(m, false);
}

/// Gauss-Jordan inverse over a field. Throws DomainError when singular.
Matrix<Rational> inverse(const Matrix<Rational>& m);
Matrix<double> inverse(const Matrix<double>& m);

/// A = [[A1, b], [c, d]] with A1 of order r-1.
template <class T>
struct BorderedMatrix {
  Matrix<T> a1;
  std::vector<T> b;  // column
  std::vector<T> c;  // row
  T d{0};

  void validate() const {
    const std::size_t r = a1.order();
    if (b.size() != r || c.size() != r) throw DimensionError("bordered matrix vectors do not match A1");
  }

  Matrix<T> assemble() const {
    validate();
    const std::size_t r = a1.order();
    Matrix<T> out(r + 1);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < r; ++j) out(i, j) = a1(i, j);
      out(i, r) = b[i];
      out(r, i) = c[i];
    }
    out(r, r) = d;
    return out;
  }
};

/// Extends det(A1) to det(A) by one bordering row and column:
///   det(A1) != 0:          det(A1) * (d - c A1^{-1} b), needs `inv_a1`
///   det(A1) == 0, d != 0:  d * det(A1 - b c / d)
///   det(A1) == 0, d == 0:  det(A1 - b c)
/// Throws ContractError when det(A1) != 0 and no inverse is given.
template <class T>
T det_bordered(const BorderedMatrix<T>& bm, const std::type_identity_t<T>& det_a1,
               const std::type_identity_t<Matrix<T>>* inv_a1) {
  static_assert(std::is_same_v<T, Rational> || std::is_same_v<T, double>,
                "bordered updates need a field");
  bm.validate();
  const std::size_t r = bm.a1.order();
  if (!is_zero(det_a1)) {
    if (inv_a1 == nullptr) throw ContractError("det(A1) is nonzero but no inverse of A1 was supplied");
    if (inv_a1->rows() != r || inv_a1->cols() != r) throw DimensionError("inverse of A1 has wrong order");
    T schur = bm.d;
    for (std::size_t i = 0; i < r; ++i) {
      T row_dot(0);
      for (std::size_t j = 0; j < r; ++j) row_dot += (*inv_a1)(i, j) * bm.b[j];
      schur -= bm.c[i] * row_dot;
    }
    return T(det_a1 * schur);
  }
  Matrix<T> reduced = bm.a1;
  const bool scaled = !is_zero(bm.d);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      T outer = bm.b[i] * bm.c[j];
      if (scaled) outer /= bm.d;
      reduced(i, j) -= outer;
    }
  T det_reduced = det_dense(reduced);
  return scaled ? T(bm.d * det_reduced) : det_reduced;
}

}  // namespace blockdet
