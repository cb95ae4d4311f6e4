#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "blockdet/blockcompute.hpp"
#include "blockdet/generator.hpp"
#include "support.hpp"

namespace blockdet {
namespace {

using testing::m1;
using testing::m2;

BlockwiseOptions serial_options() {
  BlockwiseOptions o;
  o.parallel = false;
  return o;
}

TEST(Blockwise, FixturesMatchNaive) {
  for (const auto& m : {m1(), m2()}) {
    EXPECT_EQ(det_blockwise(m), det_naive(m));
    EXPECT_EQ(per_blockwise(m), per_naive(m));
  }
  EXPECT_EQ(det_blockwise(m1()), -3996);
  EXPECT_EQ(per_blockwise(m1()), 2940);
  EXPECT_EQ(det_blockwise(m2()), -39960);
  EXPECT_EQ(per_blockwise(m2()), 29400);
}

TEST(Blockwise, PathOfTwoBlocks) {
  const Matrix<Integer> a{{1, 1, 0}, {1, 2, 1}, {0, 1, 3}};
  EXPECT_EQ(det_blockwise(a), 2);
  EXPECT_EQ(per_blockwise(a), 10);
}

TEST(Blockwise, SingleBlockFallsBack) {
  const Matrix<Integer> a{{1, 2, 3}, {4, 5, 6}, {7, 8, 10}};
  BlockwiseStats stats;
  EXPECT_EQ(det_blockwise(a, {}, &stats), det_bareiss(a));
  EXPECT_EQ(stats.dense_fallbacks, 1u);
  EXPECT_EQ(per_blockwise(a), per_ryser(a));
}

TEST(Blockwise, DisconnectedAndDegenerate) {
  const Matrix<Integer> a{{2, 0, 0, 0}, {0, 1, 1, 0}, {0, 1, 3, 5}, {0, 0, 2, 7}};
  EXPECT_EQ(det_blockwise(a), det_naive(a));
  EXPECT_EQ(per_blockwise(a), per_naive(a));
  EXPECT_EQ(det_blockwise(Matrix<Integer>(0)), 1);
  EXPECT_EQ(det_blockwise(Matrix<Integer>{{-4}}), -4);
  EXPECT_EQ(det_blockwise(Matrix<Integer>(3)), 0);
}

TEST(Blockwise, RationalAndFloatModes) {
  auto q = matrix_cast<Rational>(m1());
  q(1, 1) = Rational(5, 3);
  q(5, 5) = Rational(-7, 2);
  EXPECT_EQ(det_blockwise(q), det_naive(q));
  EXPECT_EQ(per_blockwise(q), per_naive(q));
  const auto f = matrix_cast<double>(m2());
  EXPECT_NEAR(det_blockwise(f), -39960.0, 1e-6);
  EXPECT_NEAR(per_blockwise(f), 29400.0, 1e-6);
}

TEST(Blockwise, GeneratedSmallMatchNaive) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto m = generate(testing::random_spec_of_order(seed, 2, 8, 5)).matrix;
    ASSERT_EQ(det_blockwise(m), det_naive(m)) << "seed " << seed;
    ASSERT_EQ(per_blockwise(m), per_naive(m)) << "seed " << seed;
  }
}

TEST(Blockwise, GeneratedMediumMatchDense) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto m = generate(testing::random_spec_of_order(1000 + seed, 9, 12, 6)).matrix;
    ASSERT_EQ(det_blockwise(m), det_bareiss(m)) << "seed " << seed;
    ASSERT_EQ(per_blockwise(m), per_ryser(m)) << "seed " << seed;
  }
}

// Dense random matrices with zeros sprinkled in: arbitrary block shapes, not just generated ones.
TEST(Blockwise, SparseRandomMatchNaive) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 8;
    Matrix<Integer> m(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (r == c ? rng() % 2 : rng() % 4 == 0) m(r, c) = static_cast<long>(rng() % 9) - 4;
    ASSERT_EQ(det_blockwise(m), det_naive(m)) << trial;
    ASSERT_EQ(per_blockwise(m), per_naive(m)) << trial;
  }
}

TEST(Blockwise, SerialAndParallelAgree) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto m = generate(testing::random_spec_of_order(seed, 8, 16, 6)).matrix;
    EXPECT_EQ(det_blockwise(m), det_blockwise(m, serial_options()));
    EXPECT_EQ(per_blockwise(m), per_blockwise(m, serial_options()));
  }
}

TEST(Blockwise, BorderedUpdatesGiveSameValues) {
  BlockwiseOptions o;
  o.cache.bordered_updates = true;
  EXPECT_EQ(det_blockwise(m1(), o), -3996);
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const auto m = generate(testing::random_spec_of_order(seed, 4, 14, 6)).matrix;
    ASSERT_EQ(det_blockwise(m, o), det_bareiss(m)) << seed;
  }
}

TEST(Cache, M1Entries) {
  const auto m = m1();
  const auto d = decompose(from_matrix(m));
  const auto cache = build_cache(m, d);
  // Block masks index the block's own cut-vertices in ascending order.
  EXPECT_EQ(cache.value(Quantity::det, 0, 0), -12);
  EXPECT_EQ(cache.value(Quantity::det, 0, 1), -4);
  EXPECT_EQ(cache.value(Quantity::det, 1, 0), 333);
  EXPECT_EQ(cache.value(Quantity::det, 1, 1), 0);
  EXPECT_EQ(cache.value(Quantity::det, 1, 2), 0);
  EXPECT_EQ(cache.value(Quantity::det, 1, 3), 0);
  EXPECT_EQ(cache.value(Quantity::det, 2, 0), -52);
  EXPECT_EQ(cache.value(Quantity::det, 2, 1), 3);
  EXPECT_EQ(cache.total_entries(), 2u + 4u + 2u);
  EXPECT_EQ(cache.kernel_calls(), 2 * cache.total_entries());
}

TEST(Cache, NullPartIsOne) {
  // Middle block {2,3} loses both endpoints at full removal.
  const Matrix<Integer> a{{1, 1, 0, 0}, {1, 2, 1, 0}, {0, 1, 3, 1}, {0, 0, 1, 4}};
  const auto d = decompose(from_matrix(a));
  ASSERT_EQ(d.blocks[1], (VertexSet{2, 3}));
  const auto cache = build_cache(a, d);
  EXPECT_EQ(cache.value(Quantity::det, 1, 3), 1);
  EXPECT_EQ(cache.value(Quantity::per, 1, 3), 1);
  EXPECT_EQ(cache.entries(1), 4u);
}

TEST(Cache, SerialFillIdentical) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto m = generate(testing::random_spec_of_order(seed, 10, 20, 7)).matrix;
    const auto d = decompose(from_matrix(m));
    const auto a = build_cache(m, d), b = build_cache_serial(m, d);
    for (std::size_t blk = 0; blk < d.block_count(); ++blk)
      for (RemovalMask r = 0; r < a.entries(blk); ++r) {
        EXPECT_EQ(a.value(Quantity::det, blk, r), b.value(Quantity::det, blk, r));
        EXPECT_EQ(a.value(Quantity::per, blk, r), b.value(Quantity::per, blk, r));
      }
  }
}

TEST(Cache, SufficiencyNoExtraKernelCalls) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto m = generate(testing::random_spec(seed, 6, 6)).matrix;
    BlockwiseStats stats;
    det_blockwise(m, {}, &stats);
    EXPECT_EQ(stats.cache_kernel_calls, stats.cache_entries);
    EXPECT_EQ(stats.dense_fallbacks + (stats.cache_entries > 0 ? 1u : 0u), stats.components);
  }
}

TEST(Coefficient, Examples) {
  const auto m = m1();
  const auto d = decompose(from_matrix(m));
  EXPECT_EQ(removal_coefficient({}, d, m), 1);
  EXPECT_EQ(removal_coefficient({2}, d, m), Rational(-5, 2));
  EXPECT_EQ(removal_coefficient({6}, d, m), 2);
  EXPECT_EQ(removal_coefficient({2, 6}, d, m), -5);
  EXPECT_THROW(removal_coefficient({3}, d, m), ContractError);
  auto no_loop = m;
  no_loop(1, 1) = 0;
  EXPECT_THROW(removal_coefficient({2}, d, no_loop), ContractError);
}

TEST(Coefficient, SubsetOrder) {
  const auto m = m2();
  const auto d = decompose(from_matrix(m));
  const auto subsets = removal_subsets(d, m);
  EXPECT_EQ(subsets, (std::vector<std::vector<std::size_t>>{{}, {0}, {1}, {0, 1}}));
  auto no_loop = m;
  no_loop(1, 1) = 0;
  EXPECT_EQ(removal_subsets(d, no_loop), (std::vector<std::vector<std::size_t>>{{}, {1}}));
}

// Two blocks sharing v: det = d1 * d2' + d1' * d2 - alpha * d1' * d2'.
TEST(TwoBlock, IdentityHolds) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GenSpec s;
    s.seed = seed;
    s.block_sizes = {2 + seed % 5, 2 + (seed / 5) % 5};
    s.loop_policy = 0.8;
    s.shuffle_labels = seed % 2;
    const auto gen = generate(s);
    const auto& m = gen.matrix;
    const auto& d = gen.expected;
    ASSERT_EQ(d.cut_count(), 1u);
    const int v = d.cut_vertices[0];
    const Integer alpha = m(v - 1, v - 1);
    auto sub = [&](std::size_t b, bool drop) {
      return principal_submatrix(m, drop ? d.blocks[b].minus(VertexSet{v}) : d.blocks[b]);
    };
    const Integer det_expect = det_bareiss(sub(0, false)) * det_bareiss(sub(1, true)) +
                               det_bareiss(sub(0, true)) * det_bareiss(sub(1, false)) -
                               alpha * det_bareiss(sub(0, true)) * det_bareiss(sub(1, true));
    const Integer per_expect = per_ryser(sub(0, false)) * per_ryser(sub(1, true)) +
                               per_ryser(sub(0, true)) * per_ryser(sub(1, false)) -
                               alpha * per_ryser(sub(0, true)) * per_ryser(sub(1, true));
    EXPECT_EQ(det_blockwise(m), det_expect);
    EXPECT_EQ(per_blockwise(m), per_expect);
    EXPECT_EQ(det_expect, det_bareiss(m));
  }
}

TEST(Integrality, ExactIntegerResultsHaveUnitDenominator) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto m = generate(testing::random_spec(seed, 5, 5)).matrix;
    EXPECT_EQ(blockwise_value(m, Quantity::det).get_den(), 1);
    EXPECT_EQ(blockwise_value(m, Quantity::per).get_den(), 1);
  }
}

TEST(Trace, M1Grouping) {
  const auto report = trace_terms(m1(), Quantity::det);
  ASSERT_EQ(report.groups.size(), 3u);
  const auto& g0 = report.groups[0];
  ASSERT_EQ(g0.subsets.size(), 1u);
  EXPECT_EQ(g0.subsets[0].terms.size(), 4u);
  EXPECT_EQ(g0.subsets[0].distinct.size(), 4u);
  // B1*(B2\2)*(B3\6), B1*(B2\{2,6})*B3, (B1\2)*B2*(B3\6), (B1\2)*(B2\6)*B3.
  const std::vector<Rational> products{Rational(-12 * 0 * 3), Rational(-12 * 0 * -52), Rational(-4 * 333 * 3),
                                       Rational(-4 * 0 * -52)};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(g0.subsets[0].terms[i].value, products[i]);
  EXPECT_EQ(g0.total, -3996);

  const auto& g1 = report.groups[1];
  ASSERT_EQ(g1.subsets.size(), 2u);
  EXPECT_EQ(g1.subsets[0].removed, (std::vector<int>{2}));
  EXPECT_EQ(g1.subsets[0].coefficient, Rational(-5, 2));
  EXPECT_EQ(g1.subsets[0].distinct.size(), 2u);
  for (const auto& x : g1.subsets[0].distinct) EXPECT_EQ(x.prefactor, -5);

  const auto& g2 = report.groups[2];
  ASSERT_EQ(g2.subsets.size(), 1u);
  EXPECT_EQ(g2.subsets[0].coefficient, -5);
  ASSERT_EQ(g2.subsets[0].distinct.size(), 1u);
  EXPECT_EQ(g2.subsets[0].distinct[0].multiplicity, 4u);
  EXPECT_EQ(g2.subsets[0].distinct[0].prefactor, -20);
  EXPECT_EQ(g2.subsets[0].distinct[0].parts, (std::vector<VertexSet>{{1, 3}, {4, 5}, {7}}));

  EXPECT_EQ(g0.total + g1.total + g2.total, Rational(det_blockwise(m1())));
  EXPECT_EQ(report.total, -3996);
}

TEST(Trace, SingleBlockAndCap) {
  const Matrix<Integer> a{{1, 2}, {3, 4}};
  const auto report = trace_terms(a, Quantity::per);
  ASSERT_EQ(report.groups.size(), 1u);
  ASSERT_EQ(report.groups[0].subsets.size(), 1u);
  EXPECT_EQ(report.groups[0].subsets[0].coefficient, 1);
  EXPECT_EQ(report.groups[0].subsets[0].terms.size(), 1u);
  EXPECT_EQ(report.total, 10);
  EXPECT_THROW(trace_terms(m2(), Quantity::det, 5), ResourceError);
}

TEST(Trace, TotalsMatchBlockwiseOnGenerated) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto m = generate(testing::random_spec(seed, 5, 5)).matrix;
    for (auto q : {Quantity::det, Quantity::per}) {
      const auto report = trace_terms(m, q);
      Rational sum = 0;
      for (const auto& g : report.groups) {
        Rational grouped = 0;
        for (const auto& s : g.subsets) {
          Rational distinct = 0;
          for (const auto& x : s.distinct) distinct += x.prefactor * x.value;
          EXPECT_EQ(distinct, s.total);
          grouped += s.total;
        }
        EXPECT_EQ(grouped, g.total);
        sum += g.total;
      }
      EXPECT_EQ(sum, blockwise_value(m, q));
    }
  }
}

TEST(Limits, TooManyBlockCuts) {
  // A 26-cycle with a pendant edge on every vertex: one block holding 26 cut-vertices.
  const std::size_t ring = 26;
  Matrix<Integer> m(2 * ring);
  for (std::size_t i = 0; i < ring; ++i) {
    m(i, (i + 1) % ring) = 1;
    m(i, ring + i) = 1;
    m(ring + i, i) = 1;
  }
  BlockwiseOptions o;
  EXPECT_THROW(det_blockwise(m, o), ResourceError);
}

}  // namespace
}  // namespace blockdet
