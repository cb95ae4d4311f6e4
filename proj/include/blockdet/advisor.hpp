#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "blockdet/blocks.hpp"

namespace blockdet {

/// Exponent of the assumed O(n^eps) determinant cost (optimized CW-like bound).
inline constexpr double kDefaultEpsilon = 2.373;

/// Block sizes n_i and per-block cut counts t_i of a decomposition.
struct ComplexityProfile {
  std::size_t n = 0;
  std::size_t components = 1;
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> cuts;
  std::size_t total_cuts = 0;
  double epsilon = kDefaultEpsilon;

  std::size_t k() const noexcept { return sizes.size(); }
  /// Largest cut count of any block.
  std::size_t gamma() const noexcept;
  /// Largest block size.
  std::size_t delta() const noexcept;
  /// Throws DomainError when the fields are inconsistent.
  void validate() const;
};

ComplexityProfile profile_of(const BlockDecomposition& d, double epsilon = kDefaultEpsilon);

/// sum_i 2^{t_i} n_i^eps
double det_cost(const ComplexityProfile& p);
/// sum_i 2^{t_i} 2^{n_i} n_i^2; +inf when it leaves double range.
double per_cost(const ComplexityProfile& p);
/// log2 of per_cost, finite for any size.
double log2_per_cost(const ComplexityProfile& p);

enum class Method { blockwise, dense };

inline const char* to_string(Method m) { return m == Method::blockwise ? "blockwise" : "dense"; }

struct Recommendation {
  Method det = Method::dense;
  Method per = Method::dense;
  double det_cost = 0;
  double det_dense_cost = 0;     // n^eps
  double log2_per_cost = 0;
  double log2_per_dense_cost = 0;  // log2(2^n n^2)
};

/// Blockwise iff the block cost is strictly below the dense cost; ties go dense.
Recommendation recommend(const ComplexityProfile& p);

/// Largest Gamma with k 2^Gamma Delta^eps <= n^eps, i.e. eps log2(n/Delta) - log2 k.
/// Throws DomainError unless n >= Delta >= 1 and k >= 1.
double gamma_bound_det(double n, double delta, double k, double epsilon = kDefaultEpsilon);
/// Largest Gamma with k 2^Gamma 2^Delta Delta^2 <= 2^n n^2.
double gamma_bound_per(double n, double delta, double k);

struct CurvePoint {
  std::size_t k = 0;
  double gamma_max = 0;
  bool vacuous = false;  // bound below zero, reported as 0
};

enum class CurveKind { det, per };

/// One row per k in [k_first, k_last].
std::vector<CurvePoint> curve_points(double n, double delta, double epsilon, std::size_t k_first,
                                     std::size_t k_last, CurveKind kind = CurveKind::det);

/// "k,gamma_max,vacuous" header plus one line per point.
std::string curve_csv(std::span<const CurvePoint> points);

/// Least-squares slope of log(time) against log(n). Needs two distinct orders
/// and positive times (DomainError otherwise).
double fit_effective_epsilon(std::span<const std::pair<double, double>> order_and_seconds);

}  // namespace blockdet
