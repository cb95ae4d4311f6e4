#include "blockdet/kernels.hpp"

#include <omp.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>

namespace blockdet {

namespace {

// Rows updated per pivot below this count stay on one thread.
constexpr std::size_t kBareissParallelRows = 48;
// Below this order the Gray-code walk runs as one chunk.
constexpr std::size_t kRyserChunkedOrder = 12;
// Fixed chunk count so floating results do not depend on the thread count.
constexpr std::uint64_t kRyserChunks = 64;

Integer bareiss_in_place(Matrix<Integer>& a, bool parallel) {
  const std::size_t n = a.order();
  if (n == 0) return 1;
  int sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(a(k, k)) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(a(p, k)) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = k; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    const std::size_t rows = n - k - 1;
    const long first = static_cast<long>(k + 1);
    const long last = static_cast<long>(n);
#pragma omp parallel for schedule(static) if (parallel && rows >= kBareissParallelRows)
    for (long i = first; i < last; ++i) {
      mpz_ptr pivot_col = a(i, k).get_mpz_t();
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_ptr x = a(i, j).get_mpz_t();
        mpz_mul(x, x, a(k, k).get_mpz_t());
        mpz_submul(x, pivot_col, a(k, j).get_mpz_t());
        mpz_divexact(x, x, prev.get_mpz_t());
      }
    }
    prev = a(k, k);
  }
  Integer det = a(n - 1, n - 1);
  return sign < 0 ? Integer(-det) : det;
}

// Scales each row by the lcm of its denominators; returns the integer matrix
// and the product of the scale factors.
std::pair<Matrix<Integer>, Integer> clear_denominators(const Matrix<Rational>& m) {
  const std::size_t n = m.order();
  Matrix<Integer> out(n);
  Integer scale_product = 1;
  for (std::size_t r = 0; r < n; ++r) {
    Integer l = 1;
    for (std::size_t c = 0; c < n; ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < n; ++c) out(r, c) = Integer(m(r, c).get_num() * (l / m(r, c).get_den()));
    scale_product *= l;
  }
  return {std::move(out), std::move(scale_product)};
}

void check_ryser_cap(std::size_t n, std::size_t cap) {
  if (n > cap)
    throw ResourceError("Ryser permanent is capped at order " + std::to_string(cap) + ", got " +
                        std::to_string(n));
  if (n >= 63) throw ResourceError("Ryser permanent cannot enumerate 2^" + std::to_string(n) + " subsets");
}

void assign_int128(mpz_class& z, __int128 v) {
  const bool negative = v < 0;
  unsigned __int128 u = negative ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  mpz_set_ui(z.get_mpz_t(), static_cast<unsigned long>(u >> 64));
  mpz_mul_2exp(z.get_mpz_t(), z.get_mpz_t(), 64);
  mpz_add_ui(z.get_mpz_t(), z.get_mpz_t(), static_cast<unsigned long>(u));
  if (negative) mpz_neg(z.get_mpz_t(), z.get_mpz_t());
}

std::uint64_t gray(std::uint64_t g) { return g ^ (g >> 1); }

// Chunk [lo, hi) of the Gray-code walk g = 1 .. 2^n - 1 over column subsets,
// returning sum over visited S of (-1)^{|S|} prod_i rowsum_i(S).
// Entries are 64-bit with every absolute row sum below 2^62; products are
// gathered in __int128 and spilled to GMP only on overflow.
Integer ryser_chunk_small(const std::vector<std::int64_t>& col_major, std::size_t n, std::uint64_t lo,
                          std::uint64_t hi) {
  std::vector<std::int64_t> sums(n, 0);
  const std::uint64_t start = gray(lo);
  for (std::size_t j = 0; j < n; ++j)
    if (start >> j & 1u)
      for (std::size_t i = 0; i < n; ++i) sums[i] += col_major[j * n + i];
  std::size_t zeros = 0;
  for (auto s : sums) zeros += s == 0;
  bool odd = std::popcount(start) & 1;
  std::uint64_t subset = start;

  Integer total = 0;
  Integer spill;
  __int128 running = 0;
  for (std::uint64_t g = lo; g < hi; ++g) {
    if (g != lo) {
      const int j = std::countr_zero(g);
      subset ^= std::uint64_t{1} << j;
      const bool added = subset >> j & 1u;
      const std::int64_t* col = &col_major[static_cast<std::size_t>(j) * n];
      for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t before = sums[i];
        sums[i] = added ? before + col[i] : before - col[i];
        zeros += (sums[i] == 0) - (before == 0);
      }
      odd = !odd;
    }
    if (zeros) continue;

    __int128 acc = 1;
    bool spilled = false;
    for (std::size_t i = 0; i < n; ++i) {
      __int128 next;
      if (__builtin_mul_overflow(acc, static_cast<__int128>(sums[i]), &next)) {
        mpz_class part;
        assign_int128(part, acc);
        if (spilled)
          spill *= part;
        else
          spill = part;
        spilled = true;
        acc = sums[i];
      } else {
        acc = next;
      }
    }
    if (spilled) {
      mpz_class part;
      assign_int128(part, acc);
      spill *= part;
      if (odd)
        total -= spill;
      else
        total += spill;
      continue;
    }
    __int128 next;
    const bool overflow =
        odd ? __builtin_sub_overflow(running, acc, &next) : __builtin_add_overflow(running, acc, &next);
    if (overflow) {
      mpz_class part;
      assign_int128(part, running);
      total += part;
      assign_int128(part, acc);
      if (odd)
        total -= part;
      else
        total += part;
      running = 0;
    } else {
      running = next;
    }
  }
  mpz_class part;
  assign_int128(part, running);
  total += part;
  return total;
}

// Same walk for arbitrary scalars (GMP integers with large entries, doubles).
template <class T>
T ryser_chunk_generic(const Matrix<T>& m, std::uint64_t lo, std::uint64_t hi) {
  const std::size_t n = m.rows();
  std::vector<T> sums(n, T(0));
  const std::uint64_t start = gray(lo);
  for (std::size_t j = 0; j < n; ++j)
    if (start >> j & 1u)
      for (std::size_t i = 0; i < n; ++i) sums[i] += m(i, j);
  bool odd = std::popcount(start) & 1;
  std::uint64_t subset = start;
  T total(0);
  T product(0);
  for (std::uint64_t g = lo; g < hi; ++g) {
    if (g != lo) {
      const int j = std::countr_zero(g);
      subset ^= std::uint64_t{1} << j;
      if (subset >> j & 1u)
        for (std::size_t i = 0; i < n; ++i) sums[i] += m(i, static_cast<std::size_t>(j));
      else
        for (std::size_t i = 0; i < n; ++i) sums[i] -= m(i, static_cast<std::size_t>(j));
      odd = !odd;
    }
    product = sums[0];
    for (std::size_t i = 1; i < n && !is_zero(product); ++i) product *= sums[i];
    if (odd)
      total -= product;
    else
      total += product;
  }
  return total;
}

template <class T, class Chunk>
T ryser_chunked(std::size_t n, Chunk&& chunk) {
  const std::uint64_t steps = (std::uint64_t{1} << n) - 1;
  const std::uint64_t chunks = n < kRyserChunkedOrder ? 1 : kRyserChunks;
  std::vector<T> partial(chunks, T(0));
  const long count = static_cast<long>(chunks);
#pragma omp parallel for schedule(dynamic, 1) if (chunks > 1)
  for (long c = 0; c < count; ++c) {
    const std::uint64_t lo = 1 + steps * static_cast<std::uint64_t>(c) / chunks;
    const std::uint64_t hi = 1 + steps * static_cast<std::uint64_t>(c + 1) / chunks;
    if (lo < hi) partial[static_cast<std::size_t>(c)] = chunk(lo, hi);
  }
  T total(0);
  for (const auto& p : partial) total += p;
  return n % 2 ? T(-total) : total;
}

bool fits_small_ryser(const Matrix<Integer>& m, std::vector<std::int64_t>& col_major) {
  const std::size_t n = m.rows();
  col_major.assign(n * n, 0);
  const Integer limit = Integer(1) << 62;
  for (std::size_t i = 0; i < n; ++i) {
    Integer row_abs = 0;
    for (std::size_t j = 0; j < n; ++j) {
      row_abs += abs(m(i, j));
      if (row_abs >= limit) return false;
      col_major[j * n + i] = m(i, j).get_si();
    }
  }
  return true;
}

template <class T>
Matrix<T> gauss_jordan_inverse(const Matrix<T>& m) {
  const std::size_t n = m.order();
  Matrix<T> a = m;
  Matrix<T> inv = Matrix<T>::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    if constexpr (std::is_same_v<T, double>) {
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    } else {
      while (p < n && is_zero(a(p, k))) ++p;
    }
    if (p == n || is_zero(a(p, k))) throw DomainError("matrix is singular");
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(k, j), a(p, j));
        std::swap(inv(k, j), inv(p, j));
      }
    const T pivot = a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) /= pivot;
      inv(k, j) /= pivot;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || is_zero(a(i, k))) continue;
      const T factor = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= factor * a(k, j);
        inv(i, j) -= factor * inv(k, j);
      }
    }
  }
  return inv;
}

}  // namespace

Integer det_bareiss(const Matrix<Integer>& m) {
  Matrix<Integer> work = m;
  return bareiss_in_place(work, true);
}

Rational det_bareiss(const Matrix<Rational>& m) {
  auto [scaled, factor] = clear_denominators(m);
  Rational det(bareiss_in_place(scaled, true), factor);
  det.canonicalize();
  return det;
}

double det_lu(const Matrix<double>& m) {
  const std::size_t n = m.order();
  Matrix<double> a = m;
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (a(p, k) == 0.0) return 0.0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

Integer per_ryser(const Matrix<Integer>& m, std::size_t cap) {
  const std::size_t n = m.order();
  check_ryser_cap(n, cap);
  if (n == 0) return 1;
  std::vector<std::int64_t> col_major;
  if (fits_small_ryser(m, col_major))
    return ryser_chunked<Integer>(
        n, [&](std::uint64_t lo, std::uint64_t hi) { return ryser_chunk_small(col_major, n, lo, hi); });
  return ryser_chunked<Integer>(
      n, [&](std::uint64_t lo, std::uint64_t hi) { return ryser_chunk_generic(m, lo, hi); });
}

Rational per_ryser(const Matrix<Rational>& m, std::size_t cap) {
  check_ryser_cap(m.order(), cap);
  auto [scaled, factor] = clear_denominators(m);
  Rational per(per_ryser(scaled, cap), factor);
  per.canonicalize();
  return per;
}

double per_ryser(const Matrix<double>& m, std::size_t cap) {
  const std::size_t n = m.order();
  check_ryser_cap(n, cap);
  if (n == 0) return 1.0;
  return ryser_chunked<double>(
      n, [&](std::uint64_t lo, std::uint64_t hi) { return ryser_chunk_generic(m, lo, hi); });
}

Matrix<Rational> inverse(const Matrix<Rational>& m) { return gauss_jordan_inverse(m); }
Matrix<double> inverse(const Matrix<double>& m) { return gauss_jordan_inverse(m); }

namespace serial {

Integer det_bareiss(const Matrix<Integer>& m) {
  Matrix<Integer> work = m;
  return bareiss_in_place(work, false);
}

// Plain Gray-code Ryser: one pass, no chunking, no fixed-width fast path.
template <class T>
T ryser_reference(const Matrix<T>& m, std::size_t cap) {
  const std::size_t n = m.order();
  check_ryser_cap(n, cap);
  if (n == 0) return T(1);
  std::vector<T> sums(n, T(0));
  T total(0);
  std::uint64_t subset = 0;
  const std::uint64_t end = std::uint64_t{1} << n;
  for (std::uint64_t g = 1; g < end; ++g) {
    const int j = std::countr_zero(g);
    subset ^= std::uint64_t{1} << j;
    const bool added = subset >> j & 1u;
    for (std::size_t i = 0; i < n; ++i) {
      if (added)
        sums[i] += m(i, static_cast<std::size_t>(j));
      else
        sums[i] -= m(i, static_cast<std::size_t>(j));
    }
    T product(1);
    for (std::size_t i = 0; i < n; ++i) product *= sums[i];
    if (std::popcount(subset) & 1)
      total -= product;
    else
      total += product;
  }
  return n % 2 ? T(-total) : total;
}

Integer per_ryser(const Matrix<Integer>& m, std::size_t cap) { return ryser_reference(m, cap); }
double per_ryser(const Matrix<double>& m, std::size_t cap) { return ryser_reference(m, cap); }

}  // namespace serial

}  // namespace blockdet
