#pragma once

#include <random>
#include <vector>

#include "blockdet/generator.hpp"
#include "blockdet/matrix.hpp"
#include "blockdet/scalar.hpp"

namespace blockdet::testing {

// Seven vertices, three blocks {1,2,3}, {2,4,5,6}, {6,7}; cut-vertices 2 and 6.
inline Matrix<Integer> m1() {
  return {{0, 3, 2, 0, 0, 0, 0},  {-7, 5, -1, 1, -8, 0, 0}, {2, -1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, -3, 0},
          {0, 12, 0, 0, 0, 1, 0}, {0, 0, 0, 1, 1, -4, 2},   {0, 0, 0, 0, 0, 20, 3}};
}

// m1 with a pendant vertex 8 hanging off vertex 6.
inline Matrix<Integer> m2() {
  Matrix<Integer> m(8);
  const auto a = m1();
  for (std::size_t r = 0; r < 7; ++r)
    for (std::size_t c = 0; c < 7; ++c) m(r, c) = a(r, c);
  m(5, 7) = -2;
  m(7, 5) = -2;
  m(7, 7) = 10;
  return m;
}

// Random block plan with at most `max_blocks` blocks of size 2..max_size.
inline GenSpec random_spec(std::uint64_t seed, std::size_t max_blocks, std::size_t max_size) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 17);
  GenSpec s;
  s.seed = seed;
  const std::size_t k = std::uniform_int_distribution<std::size_t>(1, max_blocks)(rng);
  for (std::size_t i = 0; i < k; ++i) s.block_sizes.push_back(std::uniform_int_distribution<std::size_t>(2, max_size)(rng));
  s.attachment = (rng() & 1) ? "chain" : "random_tree";
  s.loop_policy = std::uniform_real_distribution<double>(0, 1)(rng);
  s.edge_density = std::uniform_real_distribution<double>(0, 1)(rng);
  s.shuffle_labels = rng() & 1;
  return s;
}

// Random plan whose order n = 1 + sum(size - 1) lands in [lo, hi].
inline GenSpec random_spec_of_order(std::uint64_t seed, std::size_t lo, std::size_t hi, std::size_t max_size) {
  std::mt19937_64 rng(seed * 0x2545f4914f6cdd1dULL + 5);
  const std::size_t target = std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  GenSpec s;
  s.seed = seed;
  std::size_t n = 1;
  while (n < target) {
    const std::size_t room = target - n + 1;
    const std::size_t size = std::min(room, std::uniform_int_distribution<std::size_t>(2, max_size)(rng));
    s.block_sizes.push_back(size);
    n += size - 1;
  }
  s.attachment = (rng() & 1) ? "chain" : "random_tree";
  s.loop_policy = std::uniform_real_distribution<double>(0, 1)(rng);
  s.edge_density = std::uniform_real_distribution<double>(0, 1)(rng);
  s.shuffle_labels = rng() & 1;
  return s;
}

// Uniformly random dense matrix with entries in [lo, hi].
inline Matrix<Integer> random_dense(std::mt19937_64& rng, std::size_t n, int lo = -5, int hi = 5) {
  Matrix<Integer> m(n);
  std::uniform_int_distribution<int> w(lo, hi);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = w(rng);
  return m;
}

}  // namespace blockdet::testing
