// Wall-clock check of the advisor on the standard benchmark family: every
// blockwise recommendation must come with a measured blockwise win.
#include <gtest/gtest.h>

#include <chrono>

#include "blockdet/advisor.hpp"
#include "blockdet/blockcompute.hpp"
#include "blockdet/generator.hpp"

namespace blockdet {
namespace {

template <class F>
double best_ms(F&& f, int repeat = 3) {
  double best = 1e300;
  for (int i = 0; i < repeat; ++i) {
    const auto start = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
  }
  return best;
}

Matrix<Integer> chain(std::size_t blocks, std::size_t size, std::uint64_t seed) {
  GenSpec s;
  s.block_sizes.assign(blocks, size);
  s.seed = seed;
  return generate(s).matrix;
}

TEST(StandardFamily, DetChainOfSize40) {
  for (std::size_t blocks : {3u, 4u, 5u}) {
    const auto m = chain(blocks, 40, blocks);
    const auto rec = recommend(profile_of(decompose(from_matrix(m))));
    if (rec.det != Method::blockwise) continue;
    const double blockwise = best_ms([&] { det_blockwise(m); });
    const double dense = best_ms([&] { det_bareiss(m); });
    EXPECT_LT(blockwise, dense) << blocks << " blocks";
  }
}

TEST(StandardFamily, PerChainOfSize8) {
  for (std::size_t blocks : {2u, 3u}) {
    const auto m = chain(blocks, 8, blocks);
    const auto rec = recommend(profile_of(decompose(from_matrix(m))));
    ASSERT_EQ(rec.per, Method::blockwise);
    const double blockwise = best_ms([&] { per_blockwise(m); });
    const double dense = best_ms([&] { per_ryser(m); }, 1);
    EXPECT_LT(blockwise, dense) << blocks << " blocks";
  }
}

}  // namespace
}  // namespace blockdet
