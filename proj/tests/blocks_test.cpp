#include <gtest/gtest.h>

#include <random>

#include "blockdet/blocks.hpp"
#include "blockdet/generator.hpp"
#include "support.hpp"

namespace blockdet {
namespace {

SimpleGraph undirected(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  Matrix<Integer> m(n);
  for (auto [u, v] : edges) m(u - 1, v - 1) = m(v - 1, u - 1) = 1;
  return underlying_graph(from_matrix(m));
}

std::vector<std::size_t> cut_indices(const BlockDecomposition& d) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < d.cut_count(); ++i) out.push_back(d.cut_index(i));
  return out;
}

TEST(Decompose, M1) {
  const auto d = decompose(from_matrix(testing::m1()));
  EXPECT_EQ(d.blocks, (std::vector<VertexSet>{{1, 2, 3}, {2, 4, 5, 6}, {6, 7}}));
  EXPECT_EQ(d.cut_vertices, (std::vector<int>{2, 6}));
  EXPECT_EQ(cut_indices(d), (std::vector<std::size_t>{2, 2}));
  EXPECT_EQ(d.membership, (std::vector<std::vector<std::size_t>>{{0, 1}, {1, 2}}));
  EXPECT_TRUE(size_identity_holds(d));
}

TEST(Decompose, M2) {
  const auto d = decompose(from_matrix(testing::m2()));
  EXPECT_EQ(d.blocks, (std::vector<VertexSet>{{1, 2, 3}, {2, 4, 5, 6}, {6, 7}, {6, 8}}));
  EXPECT_EQ(d.cut_vertices, (std::vector<int>{2, 6}));
  EXPECT_EQ(cut_indices(d), (std::vector<std::size_t>{2, 3}));
}

TEST(Decompose, SmallShapes) {
  const auto triangle = decompose(undirected(3, {{1, 2}, {2, 3}, {1, 3}}));
  EXPECT_EQ(triangle.blocks.size(), 1u);
  EXPECT_TRUE(triangle.cut_vertices.empty());

  const auto path = decompose(undirected(3, {{1, 2}, {2, 3}}));
  EXPECT_EQ(path.blocks, (std::vector<VertexSet>{{1, 2}, {2, 3}}));
  EXPECT_EQ(path.cut_vertices, (std::vector<int>{2}));

  // Two components and an isolated vertex.
  const auto split = decompose(undirected(5, {{1, 2}, {3, 4}}));
  EXPECT_EQ(split.blocks, (std::vector<VertexSet>{{1, 2}, {3, 4}, {5}}));
  EXPECT_EQ(split.components.size(), 3u);
  EXPECT_TRUE(size_identity_holds(split));
}

TEST(Decompose, EmptyGraphThrows) { EXPECT_THROW(decompose(SimpleGraph{}), DomainError); }

TEST(Bruteforce, Examples) {
  EXPECT_EQ(cut_vertices_bruteforce(from_matrix(testing::m1())), (VertexSet{2, 6}));
  EXPECT_EQ(cut_vertices_bruteforce(undirected(3, {{1, 2}, {2, 3}})), (VertexSet{2}));
  EXPECT_TRUE(cut_vertices_bruteforce(undirected(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}})).empty());
}

// Edge direction is ignored: a one-way edge still joins its endpoints.
TEST(Decompose, DirectionBlind) {
  Matrix<Integer> m(3);
  m(0, 1) = 1;
  m(2, 1) = 4;
  const auto d = decompose(from_matrix(m));
  EXPECT_EQ(d.cut_vertices, (std::vector<int>{2}));
}

void check_invariants(const SimpleGraph& g, const BlockDecomposition& d) {
  // Union covers; non-cut vertices in one block; cut-vertex i in T(i) blocks.
  std::map<int, std::size_t> count;
  for (const auto& b : d.blocks)
    for (int v : b) ++count[v];
  ASSERT_EQ(count.size(), g.vertices.size());
  for (auto [v, c] : count) {
    const auto pos = d.cut_position(v);
    if (pos == VertexSet::npos)
      EXPECT_EQ(c, 1u) << v;
    else
      EXPECT_EQ(c, d.cut_index(pos)) << v;
  }
  for (std::size_t a = 0; a < d.blocks.size(); ++a)
    for (std::size_t b = a + 1; b < d.blocks.size(); ++b) {
      const auto overlap = d.blocks[a].minus(d.blocks[a].minus(d.blocks[b]));
      ASSERT_LE(overlap.size(), 1u);
      if (overlap.size() == 1) EXPECT_NE(d.cut_position(overlap.front()), VertexSet::npos);
    }
  EXPECT_TRUE(size_identity_holds(d));
  EXPECT_TRUE(std::is_sorted(d.blocks.begin(), d.blocks.end()));
  EXPECT_TRUE(std::is_sorted(d.cut_vertices.begin(), d.cut_vertices.end()));
}

TEST(Decompose, AgreesWithBruteforceOnRandomGraphs) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    const double p = std::uniform_real_distribution<double>(0.05, 0.6)(rng);
    std::vector<std::pair<int, int>> edges;
    for (int u = 1; u <= static_cast<int>(n); ++u)
      for (int v = u + 1; v <= static_cast<int>(n); ++v)
        if (std::uniform_real_distribution<double>(0, 1)(rng) < p) edges.emplace_back(u, v);
    const auto g = undirected(n, edges);
    const auto d = decompose(g);
    ASSERT_EQ(VertexSet(d.cut_vertices), cut_vertices_bruteforce(g)) << "trial " << trial;
    check_invariants(g, d);
  }
}

TEST(Decompose, RecoversGeneratedPlan) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const auto spec = testing::random_spec(seed, 6, 6);
    const auto gen = generate(spec);
    const auto d = decompose(from_matrix(gen.matrix));
    ASSERT_EQ(d, gen.expected) << "seed " << seed;
    check_invariants(underlying_graph(from_matrix(gen.matrix)), d);
  }
}

TEST(Assemble, RejectsUncoveredVertex) {
  EXPECT_THROW(assemble_decomposition(VertexSet{1, 2, 3}, {VertexSet{1, 2}}), DomainError);
}

}  // namespace
}  // namespace blockdet
