#pragma once

#include <cstddef>
#include <vector>

#include "blockdet/graph.hpp"

namespace blockdet {

/// Blocks (biconnected components) of the undirected graph underlying a digraph.
///
/// Blocks are ordered lexicographically by their ascending vertex lists, which
/// sorts them by smallest vertex id first. Cut-vertices are ascending.
/// Indices into `blocks` and `cut_vertices` are 0-based.
struct BlockDecomposition {
  VertexSet vertices;
  std::vector<VertexSet> blocks;
  std::vector<int> cut_vertices;
  /// membership[i]: ascending indices of the blocks containing cut_vertices[i] (S(i)).
  std::vector<std::vector<std::size_t>> membership;
  /// block_cuts[b]: ascending positions (into cut_vertices) of the cut-vertices of block b.
  std::vector<std::vector<std::size_t>> block_cuts;
  std::vector<VertexSet> components;
  std::vector<std::size_t> block_component;

  std::size_t block_count() const noexcept { return blocks.size(); }
  std::size_t cut_count() const noexcept { return cut_vertices.size(); }
  /// T(i): number of blocks holding cut-vertex i.
  std::size_t cut_index(std::size_t i) const { return membership.at(i).size(); }
  /// t_b: number of cut-vertices inside block b.
  std::size_t block_cut_count(std::size_t b) const { return block_cuts.at(b).size(); }
  /// Position of vertex `v` in cut_vertices, or VertexSet::npos.
  std::size_t cut_position(int v) const;

  friend bool operator==(const BlockDecomposition&, const BlockDecomposition&) = default;
};

/// Hopcroft-Tarjan biconnected components. Isolated vertices form singleton
/// blocks. Throws DomainError on an empty graph.
BlockDecomposition decompose(const SimpleGraph& g);

template <class T>
BlockDecomposition decompose(const WeightedDigraph<T>& g) {
  return decompose(underlying_graph(g));
}

/// Builds the decomposition record for known blocks over `vertices` (derives
/// cut-vertices, membership and components). Used for generator ground truth.
BlockDecomposition assemble_decomposition(const VertexSet& vertices, std::vector<VertexSet> blocks);

/// Vertices whose deletion strictly increases the component count. O(n (n + m)).
VertexSet cut_vertices_bruteforce(const SimpleGraph& g);

template <class T>
VertexSet cut_vertices_bruteforce(const WeightedDigraph<T>& g) {
  return cut_vertices_bruteforce(underlying_graph(g));
}

/// Connected components, each as a vertex set, ordered by smallest vertex.
std::vector<VertexSet> connected_components(const SimpleGraph& g);

/// n_C = sum over blocks of C of (n_i - 1), plus 1, for every component C.
bool size_identity_holds(const BlockDecomposition& d);

}  // namespace blockdet
