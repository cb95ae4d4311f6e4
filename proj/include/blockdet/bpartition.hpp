#pragma once

#include <cstddef>
#include <iterator>
#include <optional>
#include <vector>

#include "blockdet/blocks.hpp"
#include "blockdet/scalar.hpp"

namespace blockdet {

/// X: for each cut-vertex (in BlockDecomposition::cut_vertices order) the
/// 0-based index of the block it stays in.
using Assignment = std::vector<std::size_t>;

/// One B-partition: part b is block b minus the cut-vertices assigned elsewhere.
struct BPartition {
  Assignment assignment;
  std::vector<VertexSet> parts;
  friend bool operator==(const BPartition&, const BPartition&) = default;
};

/// Product of the cut-indices; 1 without cut-vertices.
Integer bpartition_count(const BlockDecomposition& d);

/// Throws DomainError when X has the wrong length or names a block not containing its cut-vertex.
std::vector<VertexSet> parts_of(const BlockDecomposition& d, const Assignment& x);

/// Mixed-radix counter over S(1) x ... x S(t); the last cut-vertex varies fastest.
/// digits()[i] indexes membership[i].
class AssignmentOdometer {
 public:
  explicit AssignmentOdometer(const BlockDecomposition& d);

  const std::vector<std::size_t>& digits() const noexcept { return digits_; }
  std::size_t block_of(std::size_t cut) const { return d_->membership[cut][digits_[cut]]; }
  Assignment assignment() const;

  /// Steps to the next assignment. Returns false after the last one. On success
  /// `first_changed` is the smallest digit position that changed; every
  /// position after it changed too.
  bool advance(std::size_t& first_changed);

 private:
  const BlockDecomposition* d_;
  std::vector<std::size_t> digits_;
};

/// Lazily enumerates every B-partition in lexicographic order of X.
/// Each iterator owns its state; the decomposition must outlive the range.
class BPartitionRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = BPartition;
    using difference_type = std::ptrdiff_t;
    using pointer = const BPartition*;
    using reference = const BPartition&;

    iterator() = default;
    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& a, const iterator& b) { return a.done_ == b.done_; }

   private:
    friend class BPartitionRange;
    explicit iterator(const BlockDecomposition& d);
    void refresh();

    const BlockDecomposition* d_ = nullptr;
    std::optional<AssignmentOdometer> odometer_;
    BPartition current_;
    bool done_ = true;
  };

  explicit BPartitionRange(const BlockDecomposition& d) : d_(&d) {}
  iterator begin() const { return iterator(*d_); }
  iterator end() const { return {}; }

 private:
  const BlockDecomposition* d_;
};

inline BPartitionRange enumerate_bpartitions(const BlockDecomposition& d) { return BPartitionRange(d); }

}  // namespace blockdet
