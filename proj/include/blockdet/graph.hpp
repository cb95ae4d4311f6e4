#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "blockdet/error.hpp"
#include "blockdet/matrix.hpp"
#include "blockdet/scalar.hpp"

namespace blockdet {

/// Sorted set of 1-based vertex ids. Iteration is ascending.
class VertexSet {
 public:
  using const_iterator = std::vector<int>::const_iterator;

  VertexSet() = default;
  VertexSet(std::initializer_list<int> ids) : VertexSet(std::vector<int>(ids)) {}
  explicit VertexSet(std::vector<int> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }

  /// {first, ..., last}; empty when last < first.
  static VertexSet range(int first, int last) {
    VertexSet s;
    for (int v = first; v <= last; ++v) s.ids_.push_back(v);
    return s;
  }

  bool contains(int v) const { return std::binary_search(ids_.begin(), ids_.end(), v); }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  const_iterator begin() const noexcept { return ids_.begin(); }
  const_iterator end() const noexcept { return ids_.end(); }
  int front() const { return ids_.front(); }
  const std::vector<int>& ids() const noexcept { return ids_; }

  /// Position of `v` in ascending order, or npos.
  std::size_t index_of(int v) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
    return (it != ids_.end() && *it == v) ? static_cast<std::size_t>(it - ids_.begin()) : npos;
  }

  VertexSet minus(const VertexSet& other) const {
    VertexSet out;
    std::set_difference(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                        std::back_inserter(out.ids_));
    return out;
  }
  VertexSet united(const VertexSet& other) const {
    VertexSet out;
    std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                   std::back_inserter(out.ids_));
    return out;
  }
  bool is_subset_of(const VertexSet& other) const {
    return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;
  friend auto operator<=>(const VertexSet&, const VertexSet&) = default;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<int> ids_;
};

std::string to_string(const VertexSet& s);

template <class T>
struct Edge {
  int from;
  int to;
  T weight;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Weighted digraph G(A): edge (u,v) iff a_uv != 0 for u != v, loop at u iff a_uu != 0.
/// Immutable after construction.
template <class T>
class WeightedDigraph {
 public:
  WeightedDigraph() = default;

  /// Edges must be distinct, off-diagonal, nonzero and between listed vertices.
  WeightedDigraph(VertexSet vertices, std::vector<Edge<T>> edges, std::map<int, T> loops)
      : vertices_(std::move(vertices)), edges_(std::move(edges)), loops_(std::move(loops)) {
    std::sort(edges_.begin(), edges_.end(), [](const Edge<T>& a, const Edge<T>& b) {
      return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& e = edges_[i];
      if (!vertices_.contains(e.from) || !vertices_.contains(e.to))
        throw DomainError("edge endpoint is not a vertex");
      if (e.from == e.to) throw DomainError("loops are stored separately from edges");
      if (is_zero(e.weight)) throw DomainError("zero-weight edge");
      if (i > 0 && edges_[i - 1].from == e.from && edges_[i - 1].to == e.to)
        throw DomainError("duplicate edge");
    }
    for (const auto& [v, w] : loops_) {
      if (!vertices_.contains(v)) throw DomainError("loop on unknown vertex");
      if (is_zero(w)) throw DomainError("zero-weight loop");
    }
  }

  const VertexSet& vertices() const noexcept { return vertices_; }
  /// Sorted by (from, to).
  const std::vector<Edge<T>>& edges() const noexcept { return edges_; }
  const std::map<int, T>& loops() const noexcept { return loops_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::optional<T> weight(int from, int to) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{from, to},
                               [](const Edge<T>& e, const std::pair<int, int>& key) {
                                 return std::tie(e.from, e.to) < std::tie(key.first, key.second);
                               });
    if (it != edges_.end() && it->from == from && it->to == to) return it->weight;
    return std::nullopt;
  }

  /// Loop weight, 0 when absent.
  T loop_weight(int v) const {
    auto it = loops_.find(v);
    return it == loops_.end() ? T(0) : it->second;
  }

  friend bool operator==(const WeightedDigraph&, const WeightedDigraph&) = default;

 private:
  VertexSet vertices_;
  std::vector<Edge<T>> edges_;
  std::map<int, T> loops_;
};

/// Undirected simple graph on positions 0..n-1 of `vertices`; loops dropped, directions merged.
struct SimpleGraph {
  VertexSet vertices;
  std::vector<std::vector<std::size_t>> adjacency;
};

template <class T>
WeightedDigraph<T> from_matrix(const Matrix<T>& m) {
  const std::size_t n = m.order();
  std::vector<Edge<T>> edges;
  std::map<int, T> loops;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (is_zero(m(r, c))) continue;
      if (r == c)
        loops.emplace(static_cast<int>(r + 1), m(r, c));
      else
        edges.push_back({static_cast<int>(r + 1), static_cast<int>(c + 1), m(r, c)});
    }
  }
  return {VertexSet::range(1, static_cast<int>(n)), std::move(edges), std::move(loops)};
}

template <class T>
WeightedDigraph<T> induced_subdigraph(const WeightedDigraph<T>& g, const VertexSet& s) {
  if (!s.is_subset_of(g.vertices())) throw DomainError("vertex set " + to_string(s) + " not in digraph");
  std::vector<Edge<T>> edges;
  for (const auto& e : g.edges())
    if (s.contains(e.from) && s.contains(e.to)) edges.push_back(e);
  std::map<int, T> loops;
  for (const auto& [v, w] : g.loops())
    if (s.contains(v)) loops.emplace(v, w);
  return {s, std::move(edges), std::move(loops)};
}

/// Rows/columns of `s` (1-based ids) in ascending order.
template <class T>
Matrix<T> principal_submatrix(const Matrix<T>& m, const VertexSet& s) {
  const std::size_t n = m.order();
  for (int v : s)
    if (v < 1 || static_cast<std::size_t>(v) > n)
      throw DomainError("index " + std::to_string(v) + " outside 1.." + std::to_string(n));
  Matrix<T> out(s.size());
  std::size_t r = 0;
  for (int u : s) {
    std::size_t c = 0;
    for (int v : s) out(r, c++) = m(u - 1, v - 1);
    ++r;
  }
  return out;
}

/// Weighted adjacency matrix of `g` over its vertices in ascending order.
template <class T>
Matrix<T> to_matrix(const WeightedDigraph<T>& g) {
  const VertexSet& vs = g.vertices();
  Matrix<T> out(vs.size());
  for (const auto& e : g.edges()) out(vs.index_of(e.from), vs.index_of(e.to)) = e.weight;
  for (const auto& [v, w] : g.loops()) out(vs.index_of(v), vs.index_of(v)) = w;
  return out;
}

template <class T>
SimpleGraph underlying_graph(const WeightedDigraph<T>& g) {
  SimpleGraph out{g.vertices(), std::vector<std::vector<std::size_t>>(g.vertices().size())};
  for (const auto& e : g.edges()) {
    std::size_t a = out.vertices.index_of(e.from);
    std::size_t b = out.vertices.index_of(e.to);
    out.adjacency[a].push_back(b);
    out.adjacency[b].push_back(a);
  }
  for (auto& adj : out.adjacency) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  return out;
}

}  // namespace blockdet
