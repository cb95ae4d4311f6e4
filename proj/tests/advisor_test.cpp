#include <gtest/gtest.h>

#include <cmath>

#include "blockdet/advisor.hpp"
#include "blockdet/generator.hpp"
#include "support.hpp"

namespace blockdet {
namespace {

ComplexityProfile m1_profile(double eps) { return profile_of(decompose(from_matrix(testing::m1())), eps); }

TEST(Profile, M1) {
  const auto p = m1_profile(3);
  EXPECT_EQ(p.n, 7u);
  EXPECT_EQ(p.sizes, (std::vector<std::size_t>{3, 4, 2}));
  EXPECT_EQ(p.cuts, (std::vector<std::size_t>{1, 2, 1}));
  EXPECT_EQ(p.gamma(), 2u);
  EXPECT_EQ(p.delta(), 4u);
  EXPECT_EQ(p.k(), 3u);
}

TEST(Profile, ValidateRejectsInconsistentSizes) {
  ComplexityProfile p;
  p.n = 10;
  p.sizes = {3, 4};
  p.cuts = {1, 1};
  p.total_cuts = 1;
  EXPECT_THROW(p.validate(), DomainError);
  p.n = 6;
  EXPECT_NO_THROW(p.validate());
}

TEST(Cost, M1Values) {
  const auto p = m1_profile(3);
  EXPECT_DOUBLE_EQ(det_cost(p), 326.0);
  EXPECT_DOUBLE_EQ(per_cost(p), 1200.0);
}

TEST(Cost, SingleBlockAndAdditivity) {
  ComplexityProfile one;
  one.n = 9;
  one.sizes = {9};
  one.cuts = {0};
  one.epsilon = 2.373;
  EXPECT_DOUBLE_EQ(det_cost(one), std::pow(9.0, 2.373));
  EXPECT_DOUBLE_EQ(per_cost(one), 512.0 * 81.0);
  ComplexityProfile two;
  two.n = 10;
  two.components = 2;
  two.sizes = {5, 5};
  two.cuts = {0, 0};
  two.epsilon = 3;
  EXPECT_DOUBLE_EQ(det_cost(two), 250.0);
  EXPECT_DOUBLE_EQ(per_cost(two), 2 * 32.0 * 25.0);
}

TEST(Recommend, Examples) {
  const auto r = recommend(m1_profile(3));
  EXPECT_EQ(r.det, Method::blockwise);
  EXPECT_DOUBLE_EQ(r.det_dense_cost, 343.0);
  EXPECT_EQ(r.per, Method::blockwise);
  EXPECT_DOUBLE_EQ(std::exp2(r.log2_per_dense_cost), 6272.0);

  ComplexityProfile single;
  single.n = 6;
  single.sizes = {6};
  single.cuts = {0};
  const auto s = recommend(single);
  EXPECT_EQ(s.det, Method::dense);
  EXPECT_EQ(s.per, Method::dense);
}

TEST(Recommend, LargeOrdersStayFinite) {
  ComplexityProfile p;
  p.n = 2001;
  p.sizes = {1001, 1001};
  p.cuts = {1, 1};
  p.total_cuts = 1;
  const auto r = recommend(p);
  EXPECT_TRUE(std::isfinite(r.log2_per_cost));
  EXPECT_EQ(r.per, Method::blockwise);
}

TEST(GammaBound, ReferencePoint) {
  EXPECT_NEAR(gamma_bound_det(1000, 200, 1, 2.373), 2.373 * std::log2(5.0), 1e-9);
  EXPECT_NEAR(gamma_bound_det(1000, 200, std::pow(5.0, 2.373), 2.373), 0.0, 1e-9);
  EXPECT_NEAR(gamma_bound_per(50, 50, 1), 0.0, 1e-12);
  EXPECT_THROW(gamma_bound_det(10, 20, 1), DomainError);
  EXPECT_THROW(gamma_bound_det(10, 0, 1), DomainError);
  EXPECT_THROW(gamma_bound_per(10, 5, 0), DomainError);
}

TEST(Curve, MonotoneAndDoublingStep) {
  const auto pts = curve_points(1000, 200, 2.373, 1, 64);
  ASSERT_EQ(pts.size(), 64u);
  EXPECT_NEAR(pts[0].gamma_max, 5.5099, 1e-3);
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (!pts[i].vacuous) EXPECT_LT(pts[i].gamma_max, pts[i - 1].gamma_max);
  for (std::size_t k = 1; 2 * k <= 64; k *= 2) {
    const double a = gamma_bound_det(1000, 200, static_cast<double>(k), 2.373);
    const double b = gamma_bound_det(1000, 200, static_cast<double>(2 * k), 2.373);
    EXPECT_NEAR(a - b, 1.0, 1e-12);
  }
  EXPECT_TRUE(pts.back().vacuous);
  EXPECT_EQ(pts.back().gamma_max, 0.0);

  const auto flat = curve_points(300, 300, 2.373, 1, 1);
  EXPECT_EQ(flat[0].gamma_max, 0.0);
}

TEST(Curve, MonotoneInNAndDelta) {
  for (double k : {1.0, 3.0, 10.0}) {
    EXPECT_LE(gamma_bound_det(500, 100, k), gamma_bound_det(1000, 100, k));
    EXPECT_GE(gamma_bound_det(1000, 100, k), gamma_bound_det(1000, 200, k));
    EXPECT_LE(gamma_bound_per(500, 100, k), gamma_bound_per(1000, 100, k));
    EXPECT_GE(gamma_bound_per(1000, 100, k), gamma_bound_per(1000, 200, k));
  }
}

TEST(Curve, CsvLayout) {
  const auto pts = curve_points(1000, 200, 2.373, 1, 2);
  const auto csv = curve_csv(pts);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,gamma_max,vacuous");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(csv.substr(csv.find('\n') + 1, 2), "1,");
}

// The per-block costs are majorized by the coarse k 2^Gamma Delta^eps model.
TEST(Cost, MajorizedByCoarseBound) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto gen = generate(testing::random_spec(seed, 6, 6));
    const auto p = profile_of(gen.expected, 2.373);
    const double k = static_cast<double>(p.k()), g = static_cast<double>(p.gamma()),
                 delta = static_cast<double>(p.delta());
    EXPECT_LE(det_cost(p), k * std::exp2(g) * std::pow(delta, p.epsilon) * (1 + 1e-12));
    EXPECT_LE(log2_per_cost(p), std::log2(k) + g + delta + 2 * std::log2(delta) + 1e-12);
  }
}

TEST(FitEpsilon, RecoversCubicLaw) {
  std::vector<std::pair<double, double>> samples;
  for (double n : {10.0, 20.0, 40.0, 80.0}) samples.emplace_back(n, 1e-9 * n * n * n);
  EXPECT_NEAR(fit_effective_epsilon(samples), 3.0, 1e-9);
  std::vector<std::pair<double, double>> same{{10, 1}, {10, 2}};
  EXPECT_THROW(fit_effective_epsilon(same), DomainError);
}

}  // namespace
}  // namespace blockdet
