#include "blockdet/advisor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "blockdet/error.hpp"

namespace blockdet {

std::size_t ComplexityProfile::gamma() const noexcept {
  return cuts.empty() ? 0 : *std::max_element(cuts.begin(), cuts.end());
}

std::size_t ComplexityProfile::delta() const noexcept {
  return sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
}

void ComplexityProfile::validate() const {
  if (sizes.empty()) throw DomainError("profile has no blocks");
  if (sizes.size() != cuts.size()) throw DomainError("profile sizes and cut counts differ in length");
  if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
  if (gamma() > total_cuts) throw DomainError("a block holds more cut-vertices than the graph");
  if (delta() > n) throw DomainError("a block is larger than the graph");
  std::size_t sum = components;
  for (auto s : sizes) {
    if (s == 0) throw DomainError("empty block in profile");
    sum += s - 1;
  }
  if (sum != n) throw DomainError("block sizes violate n = sum(n_i - 1) + components");
}

ComplexityProfile profile_of(const BlockDecomposition& d, double epsilon) {
  ComplexityProfile p;
  p.n = d.vertices.size();
  p.components = d.components.size();
  p.total_cuts = d.cut_count();
  p.epsilon = epsilon;
  for (std::size_t b = 0; b < d.block_count(); ++b) {
    p.sizes.push_back(d.blocks[b].size());
    p.cuts.push_back(d.block_cut_count(b));
  }
  p.validate();
  return p;
}

double det_cost(const ComplexityProfile& p) {
  double total = 0;
  for (std::size_t i = 0; i < p.k(); ++i)
    total += std::ldexp(std::pow(static_cast<double>(p.sizes[i]), p.epsilon), static_cast<int>(p.cuts[i]));
  return total;
}

namespace {

double log2_per_term(double size, double cuts) { return cuts + size + 2.0 * std::log2(size); }

}  // namespace

double log2_per_cost(const ComplexityProfile& p) {
  std::vector<double> logs;
  for (std::size_t i = 0; i < p.k(); ++i)
    logs.push_back(log2_per_term(static_cast<double>(p.sizes[i]), static_cast<double>(p.cuts[i])));
  const double top = *std::max_element(logs.begin(), logs.end());
  double scaled = 0;
  for (double l : logs) scaled += std::exp2(l - top);
  return top + std::log2(scaled);
}

double per_cost(const ComplexityProfile& p) {
  double total = 0;
  for (std::size_t i = 0; i < p.k(); ++i) {
    const double size = static_cast<double>(p.sizes[i]);
    total += std::ldexp(size * size, static_cast<int>(std::min<std::size_t>(p.sizes[i] + p.cuts[i], 4096)));
  }
  return total;
}

Recommendation recommend(const ComplexityProfile& p) {
  p.validate();
  Recommendation r;
  r.det_cost = det_cost(p);
  r.det_dense_cost = std::pow(static_cast<double>(p.n), p.epsilon);
  r.det = r.det_cost < r.det_dense_cost ? Method::blockwise : Method::dense;
  r.log2_per_cost = log2_per_cost(p);
  r.log2_per_dense_cost = log2_per_term(static_cast<double>(p.n), 0.0);
  r.per = r.log2_per_cost < r.log2_per_dense_cost ? Method::blockwise : Method::dense;
  return r;
}

namespace {

void check_bound_args(double n, double delta, double k) {
  if (!(delta >= 1) || !(n >= delta) || !(k >= 1))
    throw DomainError("gamma bound needs n >= delta >= 1 and k >= 1");
}

}  // namespace

double gamma_bound_det(double n, double delta, double k, double epsilon) {
  check_bound_args(n, delta, k);
  if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
  return epsilon * std::log2(n / delta) - std::log2(k);
}

double gamma_bound_per(double n, double delta, double k) {
  check_bound_args(n, delta, k);
  return (n - delta) + 2.0 * std::log2(n / delta) - std::log2(k);
}

std::vector<CurvePoint> curve_points(double n, double delta, double epsilon, std::size_t k_first,
                                     std::size_t k_last, CurveKind kind) {
  std::vector<CurvePoint> out;
  for (std::size_t k = std::max<std::size_t>(k_first, 1); k <= k_last; ++k) {
    const double bound = kind == CurveKind::det ? gamma_bound_det(n, delta, static_cast<double>(k), epsilon)
                                                : gamma_bound_per(n, delta, static_cast<double>(k));
    out.push_back({k, bound < 0 ? 0.0 : bound, bound < 0});
  }
  return out;
}

std::string curve_csv(std::span<const CurvePoint> points) {
  std::string out = "k,gamma_max,vacuous\n";
  char line[96];
  for (const auto& p : points) {
    std::snprintf(line, sizeof line, "%zu,%.17g,%d\n", p.k, p.gamma_max, p.vacuous ? 1 : 0);
    out += line;
  }
  return out;
}

double fit_effective_epsilon(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 2) throw DomainError("need at least two timing samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [order, seconds] : samples) {
    if (!(order > 0) || !(seconds > 0)) throw DomainError("timing samples must be positive");
    const double x = std::log(order), y = std::log(seconds);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double count = static_cast<double>(samples.size());
  const double spread = sxx - sx * sx / count;
  if (spread <= 0) throw DomainError("timing samples need two distinct orders");
  return (sxy - sx * sy / count) / spread;
}

}  // namespace blockdet
