#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "blockdet/blocks.hpp"
#include "blockdet/bpartition.hpp"
#include "blockdet/graph.hpp"
#include "blockdet/kernels.hpp"

namespace blockdet {

enum class Quantity { det, per };

inline const char* to_string(Quantity q) { return q == Quantity::det ? "det" : "per"; }

/// Exact inputs accumulate in rationals (removal coefficients carry 1/T factors).
template <class T>
using AccumulatorOf = std::conditional_t<is_exact_v<T>, Rational, double>;

/// Removal mask of a block: bit j set means block_cuts[b][j] is removed.
using RemovalMask = std::uint64_t;

struct CacheOptions {
  bool det = true;
  bool per = true;
  /// Fill determinant entries by bordering the entry with one more cut-vertex removed.
  bool bordered_updates = false;
  std::size_t ryser_cap = kRyserDefaultCap;
  /// Blocks with more cut-vertices than this are rejected (2^t entries each).
  std::size_t max_block_cuts = 24;
};

/// For every block b and every subset R of its cut-vertices, det and/or per of
/// the principal submatrix on V(B_b) minus R. Complete: 2^{t_b} entries per block.
template <class T>
class SummandCache {
 public:
  SummandCache() = default;

  const T& value(Quantity q, std::size_t block, RemovalMask removed) const {
    const auto& table = q == Quantity::det ? det_ : per_;
    if (table.empty()) throw ContractError(std::string("cache holds no ") + to_string(q) + " values");
    return table[block][removed];
  }
  bool has(Quantity q) const { return !(q == Quantity::det ? det_ : per_).empty(); }
  std::size_t block_count() const noexcept { return sizes_.size(); }
  std::size_t entries(std::size_t block) const { return sizes_.at(block); }
  std::size_t total_entries() const {
    std::size_t total = 0;
    for (auto s : sizes_) total += s;
    return total;
  }
  /// Kernel evaluations performed while filling.
  std::size_t kernel_calls() const noexcept { return kernel_calls_; }

 private:
  template <class U>
  friend SummandCache<U> build_cache(const Matrix<U>&, const BlockDecomposition&, const CacheOptions&);
  template <class U>
  friend SummandCache<U> build_cache_serial(const Matrix<U>&, const BlockDecomposition&, const CacheOptions&);

  std::vector<std::size_t> sizes_;
  std::vector<std::vector<T>> det_;
  std::vector<std::vector<T>> per_;
  std::size_t kernel_calls_ = 0;
};

/// Vertices of block `b` that survive removal mask `removed`.
inline VertexSet surviving_vertices(const BlockDecomposition& d, std::size_t b, RemovalMask removed) {
  std::vector<int> drop;
  for (std::size_t j = 0; j < d.block_cuts[b].size(); ++j)
    if (removed >> j & 1u) drop.push_back(d.cut_vertices[d.block_cuts[b][j]]);
  return d.blocks[b].minus(VertexSet(std::move(drop)));
}

namespace detail {

struct CacheSlot {
  std::size_t block;
  RemovalMask removed;
};

// Slots grouped by removal size, largest first; slots in one level are independent.
inline std::vector<std::vector<CacheSlot>> cache_levels(const BlockDecomposition& d, const CacheOptions& opt) {
  std::size_t widest = 0;
  for (std::size_t b = 0; b < d.block_count(); ++b) {
    const std::size_t t = d.block_cut_count(b);
    if (t > opt.max_block_cuts)
      throw ResourceError("block " + std::to_string(b + 1) + " has " + std::to_string(t) +
                          " cut-vertices, cache cap is " + std::to_string(opt.max_block_cuts));
    widest = std::max(widest, t);
  }
  std::vector<std::vector<CacheSlot>> levels(widest + 1);
  for (std::size_t b = 0; b < d.block_count(); ++b) {
    const RemovalMask count = RemovalMask{1} << d.block_cut_count(b);
    for (RemovalMask r = 0; r < count; ++r)
      levels[widest - static_cast<std::size_t>(std::popcount(r))].push_back({b, r});
  }
  return levels;
}

// det of the part for `slot`, extended from the part with one more cut-vertex removed.
template <class T>
T bordered_det_entry(const Matrix<T>& m, const BlockDecomposition& d, const CacheSlot& slot,
                     const std::vector<T>& block_dets) {
  const std::size_t t = d.block_cut_count(slot.block);
  std::size_t j = 0;
  while (j < t && (slot.removed >> j & 1u)) ++j;
  const RemovalMask smaller = slot.removed | (RemovalMask{1} << j);
  const int added = d.cut_vertices[d.block_cuts[slot.block][j]];
  const VertexSet rest = surviving_vertices(d, slot.block, smaller);

  using Field = std::conditional_t<std::is_same_v<T, double>, double, Rational>;
  BorderedMatrix<Field> bm;
  bm.a1 = matrix_cast<Field>(principal_submatrix(m, rest));
  for (int u : rest) {
    bm.b.push_back(scalar_cast<Field>(m(u - 1, added - 1)));
    bm.c.push_back(scalar_cast<Field>(m(added - 1, u - 1)));
  }
  bm.d = scalar_cast<Field>(m(added - 1, added - 1));
  const Field det_a1 = scalar_cast<Field>(block_dets[smaller]);
  Field value;
  if (is_zero(det_a1)) {
    value = det_bordered<Field>(bm, det_a1, nullptr);
  } else {
    const Matrix<Field> inv = inverse(bm.a1);
    value = det_bordered<Field>(bm, det_a1, &inv);
  }
  // Moving `added` to the last row and column is a symmetric permutation: det is unchanged.
  if constexpr (std::is_same_v<T, Integer>)
    return scalar_cast<Integer>(Rational(value));
  else
    return value;
}

template <class T>
void build_cache_impl(const Matrix<T>& m, const BlockDecomposition& d, const CacheOptions& opt,
                                 bool parallel, std::size_t& kernel_calls, std::vector<std::size_t>& sizes,
                                 std::vector<std::vector<T>>& det_table, std::vector<std::vector<T>>& per_table) {
  const auto levels = detail::cache_levels(d, opt);
  sizes.assign(d.block_count(), 0);
  for (std::size_t b = 0; b < d.block_count(); ++b) sizes[b] = std::size_t{1} << d.block_cut_count(b);
  if (opt.det) {
    det_table.assign(d.block_count(), {});
    for (std::size_t b = 0; b < d.block_count(); ++b) det_table[b].assign(sizes[b], T(0));
  }
  if (opt.per) {
    per_table.assign(d.block_count(), {});
    for (std::size_t b = 0; b < d.block_count(); ++b) per_table[b].assign(sizes[b], T(0));
  }
  kernel_calls = 0;
  for (const auto& level : levels) {
    const long count = static_cast<long>(level.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) if (parallel && count > 1)
    for (long s = 0; s < count; ++s) {
      const auto& slot = level[static_cast<std::size_t>(s)];
      try {
        const bool full = slot.removed + 1 == (RemovalMask{1} << d.block_cut_count(slot.block));
        if (opt.det) {
          if (opt.bordered_updates && !full)
            det_table[slot.block][slot.removed] = detail::bordered_det_entry(m, d, slot, det_table[slot.block]);
          else
            det_table[slot.block][slot.removed] =
                det_dense(principal_submatrix(m, surviving_vertices(d, slot.block, slot.removed)));
        }
        if (opt.per)
          per_table[slot.block][slot.removed] =
              per_dense(principal_submatrix(m, surviving_vertices(d, slot.block, slot.removed)), opt.ryser_cap);
      } catch (...) {
#pragma omp critical(blockdet_cache_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    kernel_calls += level.size() * (static_cast<std::size_t>(opt.det) + static_cast<std::size_t>(opt.per));
  }
}

}  // namespace detail

/// Fills every entry; distinct entries of one removal level run concurrently.
template <class T>
SummandCache<T> build_cache(const Matrix<T>& m, const BlockDecomposition& d, const CacheOptions& opt = {}) {
  SummandCache<T> cache;
  detail::build_cache_impl(m, d, opt, true, cache.kernel_calls_, cache.sizes_, cache.det_, cache.per_);
  return cache;
}

/// Single-threaded reference fill.
template <class T>
SummandCache<T> build_cache_serial(const Matrix<T>& m, const BlockDecomposition& d, const CacheOptions& opt = {}) {
  SummandCache<T> cache;
  detail::build_cache_impl(m, d, opt, false, cache.kernel_calls_, cache.sizes_, cache.det_, cache.per_);
  return cache;
}

/// prod over v in `removed` of (-a_vv)(T(v)-1)/T(v). Every v must be a cut-vertex
/// with nonzero loop weight (ContractError otherwise); the empty product is 1.
template <class T>
AccumulatorOf<T> removal_coefficient(const std::vector<int>& removed, const BlockDecomposition& d,
                                     const Matrix<T>& m) {
  using Acc = AccumulatorOf<T>;
  Acc coefficient(1);
  for (int v : removed) {
    const std::size_t pos = d.cut_position(v);
    if (pos == VertexSet::npos) throw ContractError("vertex " + std::to_string(v) + " is not a cut-vertex");
    const T& alpha = m(v - 1, v - 1);
    if (is_zero(alpha)) throw ContractError("cut-vertex " + std::to_string(v) + " has no loop weight");
    const long t = static_cast<long>(d.cut_index(pos));
    if constexpr (std::is_same_v<Acc, Rational>) {
      Rational factor = -scalar_cast<Rational>(alpha) * Rational(Integer(t - 1), Integer(t));
      factor.canonicalize();
      coefficient *= factor;
    } else {
      coefficient *= -alpha * static_cast<double>(t - 1) / static_cast<double>(t);
    }
  }
  return coefficient;
}

/// Nonzero-loop cut-vertex subsets in ascending size, lexicographic within a size.
template <class T>
std::vector<std::vector<std::size_t>> removal_subsets(const BlockDecomposition& d, const Matrix<T>& m) {
  std::vector<std::size_t> loaded;
  for (std::size_t i = 0; i < d.cut_count(); ++i)
    if (!is_zero(m(d.cut_vertices[i] - 1, d.cut_vertices[i] - 1))) loaded.push_back(i);
  if (loaded.size() > 30) throw ResourceError("more than 30 cut-vertices carry loops");
  std::vector<std::vector<std::size_t>> out;
  const std::size_t t = loaded.size();
  for (std::size_t q = 0; q <= t; ++q) {
    std::vector<std::size_t> pick(q);
    for (std::size_t i = 0; i < q; ++i) pick[i] = i;
    while (true) {
      std::vector<std::size_t> subset;
      for (auto p : pick) subset.push_back(loaded[p]);
      out.push_back(std::move(subset));
      std::size_t i = q;
      while (i > 0 && pick[i - 1] == t - q + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t k = i; k < q; ++k) pick[k] = pick[k - 1] + 1;
    }
  }
  return out;
}

namespace detail {

// Walks every B-partition for fixed removal set `removed_cuts` (positions into
// cut_vertices), calling visit(odometer, removal masks per block).
template <class Visit>
void walk_partitions(const BlockDecomposition& d, const std::vector<std::size_t>& removed_cuts, Visit&& visit) {
  const std::size_t k = d.block_count();
  // local bit of cut i inside block membership[i][slot]
  std::vector<std::vector<RemovalMask>> bit(d.cut_count());
  for (std::size_t i = 0; i < d.cut_count(); ++i)
    for (std::size_t b : d.membership[i]) {
      const auto& cuts = d.block_cuts[b];
      const auto j = static_cast<std::size_t>(std::lower_bound(cuts.begin(), cuts.end(), i) - cuts.begin());
      bit[i].push_back(RemovalMask{1} << j);
    }
  std::vector<bool> is_removed(d.cut_count(), false);
  for (auto i : removed_cuts) is_removed[i] = true;

  std::vector<RemovalMask> full(k), kept(k, 0);
  for (std::size_t b = 0; b < k; ++b) full[b] = (RemovalMask{1} << d.block_cut_count(b)) - 1;
  AssignmentOdometer odo(d);
  auto place = [&](std::size_t i, bool on) {
    if (is_removed[i]) return;
    const std::size_t slot = odo.digits()[i];
    const std::size_t b = d.membership[i][slot];
    if (on)
      kept[b] |= bit[i][slot];
    else
      kept[b] &= ~bit[i][slot];
  };
  for (std::size_t i = 0; i < d.cut_count(); ++i) place(i, true);
  std::vector<RemovalMask> removal(k);
  for (;;) {
    for (std::size_t b = 0; b < k; ++b) removal[b] = full[b] & ~kept[b];
    visit(odo, removal);
    // Digits at positions >= first_changed move; clear them, advance, re-place.
    std::vector<std::size_t> before = odo.digits();
    std::size_t first = 0;
    if (!odo.advance(first)) break;
    for (std::size_t i = first; i < d.cut_count(); ++i) {
      if (is_removed[i]) continue;
      const std::size_t b_old = d.membership[i][before[i]];
      kept[b_old] &= ~bit[i][before[i]];
    }
    for (std::size_t i = first; i < d.cut_count(); ++i) place(i, true);
  }
}

}  // namespace detail

struct BlockwiseOptions {
  CacheOptions cache;
  bool parallel = true;
};

/// Counters for one blockwise evaluation.
struct BlockwiseStats {
  std::size_t components = 0;
  std::size_t dense_fallbacks = 0;
  std::size_t cache_entries = 0;
  std::size_t cache_kernel_calls = 0;
  std::size_t removal_subsets = 0;
  std::size_t partitions_visited = 0;
};

/// Cut-vertex-removal summation over B-partitions for one decomposition:
///   sum_S coefficient(S) * sum_P prod_b value(part_b minus S).
/// `d` must decompose G(m) and have at least one cut-vertex.
template <class T>
AccumulatorOf<T> blockwise_sum(const Matrix<T>& m, const BlockDecomposition& d, Quantity q,
                               const BlockwiseOptions& opt = {}, BlockwiseStats* stats = nullptr) {
  using Acc = AccumulatorOf<T>;
  CacheOptions copt = opt.cache;
  copt.det = q == Quantity::det;
  copt.per = q == Quantity::per;
  const SummandCache<T> cache = opt.parallel ? build_cache(m, d, copt) : build_cache_serial(m, d, copt);

  const auto subsets = removal_subsets(d, m);
  Acc total(0);
  std::size_t visited = 0;
  for (const auto& subset : subsets) {
    std::vector<int> removed_vertices;
    for (auto i : subset) removed_vertices.push_back(d.cut_vertices[i]);
    const Acc coefficient = removal_coefficient(removed_vertices, d, m);
    T inner(0);
    detail::walk_partitions(d, subset, [&](const AssignmentOdometer&, const std::vector<RemovalMask>& removal) {
      ++visited;
      T product(1);
      for (std::size_t b = 0; b < removal.size() && !is_zero(product); ++b)
        product *= cache.value(q, b, removal[b]);
      inner += product;
    });
    if constexpr (std::is_same_v<Acc, Rational>)
      total += coefficient * Rational(inner);
    else
      total += coefficient * inner;
  }
  if (stats) {
    stats->cache_entries += cache.total_entries();
    stats->cache_kernel_calls += cache.kernel_calls();
    stats->removal_subsets += subsets.size();
    stats->partitions_visited += visited;
  }
  return total;
}

/// Blockwise value before conversion back to T. Components multiply; components
/// without a cut-vertex use the dense kernel.
template <class T>
AccumulatorOf<T> blockwise_value(const Matrix<T>& m, Quantity q, const BlockwiseOptions& opt = {},
                                 BlockwiseStats* stats = nullptr) {
  using Acc = AccumulatorOf<T>;
  const std::size_t n = m.order();
  if (n == 0) return Acc(1);
  const auto whole = decompose(from_matrix(m));
  Acc product(1);
  for (const auto& component : whole.components) {
    const Matrix<T> sub = principal_submatrix(m, component);
    const auto local = decompose(from_matrix(sub));
    if (stats) ++stats->components;
    if (local.cut_count() == 0) {
      if (stats) ++stats->dense_fallbacks;
      const T value = q == Quantity::det ? det_dense(sub) : per_dense(sub, opt.cache.ryser_cap);
      if constexpr (std::is_same_v<Acc, Rational>)
        product *= Rational(value);
      else
        product *= value;
    } else {
      product *= blockwise_sum(sub, local, q, opt, stats);
    }
    if (is_zero(product)) break;
  }
  return product;
}

namespace detail {

template <class T>
T finish_blockwise(const AccumulatorOf<T>& value) {
  if constexpr (std::is_same_v<T, Integer>) {
    if (value.get_den() != 1)
      throw std::logic_error("blockwise result " + value.get_str() + " of an integer matrix is not integral");
    return value.get_num();
  } else {
    return value;
  }
}

}  // namespace detail

template <class T>
T det_blockwise(const Matrix<T>& m, const BlockwiseOptions& opt = {}, BlockwiseStats* stats = nullptr) {
  return detail::finish_blockwise<T>(blockwise_value(m, Quantity::det, opt, stats));
}

template <class T>
T per_blockwise(const Matrix<T>& m, const BlockwiseOptions& opt = {}, BlockwiseStats* stats = nullptr) {
  return detail::finish_blockwise<T>(blockwise_value(m, Quantity::per, opt, stats));
}

// ---- term trace --------------------------------------------------------------

struct TraceTerm {
  Assignment assignment;
  std::vector<VertexSet> parts;  // after removing the cut-vertex subset
  Rational value;                // product of part values
};

/// Terms of one subset that coincide after removal, merged.
struct DistinctTerm {
  std::vector<VertexSet> parts;
  std::size_t multiplicity = 0;
  Rational prefactor;  // coefficient * multiplicity
  Rational value;
};

struct TraceSubset {
  std::vector<int> removed;
  Rational coefficient;
  std::vector<TraceTerm> terms;
  std::vector<DistinctTerm> distinct;
  Rational inner_sum;
  Rational total;  // coefficient * inner_sum
};

struct TraceGroup {
  std::size_t q = 0;
  std::vector<TraceSubset> subsets;
  Rational total;
};

struct TraceReport {
  Quantity quantity = Quantity::det;
  BlockDecomposition decomposition;
  std::vector<TraceGroup> groups;  // indexed by q
  Rational total;
};

inline constexpr std::size_t kTraceDefaultCap = 10000;

/// Every (removal subset, B-partition) term of the summation over the whole
/// digraph. Throws ResourceError when the term count exceeds `cap`.
template <class T>
TraceReport trace_terms(const Matrix<T>& m, Quantity q, std::size_t cap = kTraceDefaultCap) {
  static_assert(is_exact_v<T>, "trace is exact-mode only");
  TraceReport report;
  report.quantity = q;
  report.total = 1;
  if (m.order() == 0) return report;
  report.decomposition = decompose(from_matrix(m));
  const auto& d = report.decomposition;

  const auto subsets = removal_subsets(d, m);
  const Integer terms = bpartition_count(d) * static_cast<unsigned long>(subsets.size());
  if (terms > cap)
    throw ResourceError("trace would list " + terms.get_str() + " terms, cap is " + std::to_string(cap));

  CacheOptions copt;
  copt.det = q == Quantity::det;
  copt.per = q == Quantity::per;
  const auto cache = build_cache(m, d, copt);

  report.total = 0;
  for (const auto& subset : subsets) {
    TraceSubset entry;
    for (auto i : subset) entry.removed.push_back(d.cut_vertices[i]);
    entry.coefficient = removal_coefficient(entry.removed, d, m);
    entry.inner_sum = 0;
    detail::walk_partitions(d, subset, [&](const AssignmentOdometer& odo, const std::vector<RemovalMask>& removal) {
      TraceTerm term;
      term.assignment = odo.assignment();
      term.value = 1;
      for (std::size_t b = 0; b < removal.size(); ++b) {
        term.parts.push_back(surviving_vertices(d, b, removal[b]));
        term.value *= Rational(cache.value(q, b, removal[b]));
      }
      entry.inner_sum += term.value;
      auto same = std::find_if(entry.distinct.begin(), entry.distinct.end(),
                               [&](const DistinctTerm& x) { return x.parts == term.parts; });
      if (same == entry.distinct.end())
        entry.distinct.push_back({term.parts, 1, 0, term.value});
      else
        ++same->multiplicity;
      entry.terms.push_back(std::move(term));
    });
    for (auto& x : entry.distinct) x.prefactor = entry.coefficient * static_cast<unsigned long>(x.multiplicity);
    entry.total = entry.coefficient * entry.inner_sum;
    const std::size_t size = subset.size();
    if (report.groups.size() <= size) {
      report.groups.resize(size + 1);
      for (std::size_t g = 0; g <= size; ++g) report.groups[g].q = g;
    }
    report.groups[size].total += entry.total;
    report.total += entry.total;
    report.groups[size].subsets.push_back(std::move(entry));
  }
  return report;
}

}  // namespace blockdet
