#include "blockdet/blocks.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace blockdet {

std::size_t BlockDecomposition::cut_position(int v) const {
  auto it = std::lower_bound(cut_vertices.begin(), cut_vertices.end(), v);
  return (it != cut_vertices.end() && *it == v) ? static_cast<std::size_t>(it - cut_vertices.begin())
                                                : VertexSet::npos;
}

namespace {

constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);

struct Frame {
  std::size_t vertex;
  std::size_t parent;
  std::size_t next;  // next adjacency slot to scan
};

// Iterative DFS; each block is emitted as the set of endpoints of the edges
// popped when a child's low-point does not escape above its parent.
std::vector<std::vector<std::size_t>> biconnected_blocks(const SimpleGraph& g) {
  const std::size_t n = g.adjacency.size();
  std::vector<std::size_t> disc(n, kUnvisited), low(n, 0);
  std::vector<std::pair<std::size_t, std::size_t>> edge_stack;
  std::vector<std::vector<std::size_t>> blocks;
  std::size_t clock = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (disc[root] != kUnvisited) continue;
    if (g.adjacency[root].empty()) {
      disc[root] = clock++;
      blocks.push_back({root});
      continue;
    }
    std::vector<Frame> stack{{root, kUnvisited, 0}};
    disc[root] = low[root] = clock++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& adj = g.adjacency[f.vertex];
      if (f.next < adj.size()) {
        std::size_t w = adj[f.next++];
        if (disc[w] == kUnvisited) {
          edge_stack.emplace_back(f.vertex, w);
          disc[w] = low[w] = clock++;
          stack.push_back({w, f.vertex, 0});
        } else if (w != f.parent && disc[w] < disc[f.vertex]) {
          edge_stack.emplace_back(f.vertex, w);
          low[f.vertex] = std::min(low[f.vertex], disc[w]);
        }
        continue;
      }
      const std::size_t child = f.vertex;
      stack.pop_back();
      if (stack.empty()) break;
      const std::size_t parent = stack.back().vertex;
      low[parent] = std::min(low[parent], low[child]);
      if (low[child] >= disc[parent]) {
        std::vector<std::size_t> block;
        while (true) {
          auto [a, b] = edge_stack.back();
          edge_stack.pop_back();
          block.push_back(a);
          block.push_back(b);
          if (a == parent && b == child) break;
        }
        std::sort(block.begin(), block.end());
        block.erase(std::unique(block.begin(), block.end()), block.end());
        blocks.push_back(std::move(block));
      }
    }
  }
  return blocks;
}

std::size_t count_components(const SimpleGraph& g, std::size_t excluded) {
  const std::size_t n = g.adjacency.size();
  std::vector<bool> seen(n, false);
  std::size_t count = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (s == excluded || seen[s]) continue;
    ++count;
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w : g.adjacency[v]) {
        if (w == excluded || seen[w]) continue;
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return count;
}

}  // namespace

std::vector<VertexSet> connected_components(const SimpleGraph& g) {
  const std::size_t n = g.adjacency.size();
  std::vector<bool> seen(n, false);
  std::vector<VertexSet> out;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<int> ids;
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      ids.push_back(g.vertices.ids()[v]);
      for (std::size_t w : g.adjacency[v]) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    out.emplace_back(std::move(ids));
  }
  return out;
}

BlockDecomposition assemble_decomposition(const VertexSet& vertices, std::vector<VertexSet> blocks) {
  BlockDecomposition d;
  d.vertices = vertices;
  d.blocks = std::move(blocks);
  std::sort(d.blocks.begin(), d.blocks.end());

  std::vector<std::vector<std::size_t>> holders(vertices.size());
  for (std::size_t b = 0; b < d.blocks.size(); ++b)
    for (int v : d.blocks[b]) {
      const std::size_t p = vertices.index_of(v);
      if (p == VertexSet::npos) throw DomainError("block vertex " + std::to_string(v) + " not in graph");
      holders[p].push_back(b);
    }
  for (std::size_t p = 0; p < holders.size(); ++p) {
    if (holders[p].empty()) throw DomainError("vertex " + std::to_string(vertices.ids()[p]) + " is in no block");
    if (holders[p].size() < 2) continue;
    d.cut_vertices.push_back(vertices.ids()[p]);
    d.membership.push_back(holders[p]);
  }
  d.block_cuts.assign(d.blocks.size(), {});
  for (std::size_t i = 0; i < d.membership.size(); ++i)
    for (std::size_t b : d.membership[i]) d.block_cuts[b].push_back(i);

  // Components: blocks sharing a vertex are connected.
  std::vector<std::size_t> root(d.blocks.size());
  std::iota(root.begin(), root.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (const auto& holder : d.membership)
    for (std::size_t b : holder) root[find(b)] = find(holder.front());
  std::map<std::size_t, std::vector<int>> grouped;
  for (std::size_t b = 0; b < d.blocks.size(); ++b) {
    auto& ids = grouped[find(b)];
    ids.insert(ids.end(), d.blocks[b].begin(), d.blocks[b].end());
  }
  for (auto& [r, ids] : grouped) d.components.emplace_back(std::move(ids));
  std::sort(d.components.begin(), d.components.end());
  d.block_component.resize(d.blocks.size());
  for (std::size_t b = 0; b < d.blocks.size(); ++b) {
    const int probe = d.blocks[b].front();
    for (std::size_t c = 0; c < d.components.size(); ++c)
      if (d.components[c].contains(probe)) d.block_component[b] = c;
  }
  return d;
}

BlockDecomposition decompose(const SimpleGraph& g) {
  if (g.vertices.empty()) throw DomainError("cannot decompose the null graph");
  std::vector<VertexSet> blocks;
  for (auto& local : biconnected_blocks(g)) {
    std::vector<int> ids;
    ids.reserve(local.size());
    for (std::size_t p : local) ids.push_back(g.vertices.ids()[p]);
    blocks.emplace_back(std::move(ids));
  }
  BlockDecomposition d = assemble_decomposition(g.vertices, std::move(blocks));
  if (!size_identity_holds(d)) throw std::logic_error("block size identity violated");
  return d;
}

VertexSet cut_vertices_bruteforce(const SimpleGraph& g) {
  const std::size_t base = count_components(g, kUnvisited);
  std::vector<int> cuts;
  for (std::size_t v = 0; v < g.adjacency.size(); ++v)
    if (count_components(g, v) > base) cuts.push_back(g.vertices.ids()[v]);
  return VertexSet(std::move(cuts));
}

bool size_identity_holds(const BlockDecomposition& d) {
  std::vector<std::size_t> sum(d.components.size(), 1);
  for (std::size_t b = 0; b < d.blocks.size(); ++b) sum[d.block_component[b]] += d.blocks[b].size() - 1;
  for (std::size_t c = 0; c < d.components.size(); ++c)
    if (sum[c] != d.components[c].size()) return false;
  return true;
}

}  // namespace blockdet
