#include "blockdet/bpartition.hpp"

#include <algorithm>
#include <string>

namespace blockdet {

Integer bpartition_count(const BlockDecomposition& d) {
  Integer product = 1;
  for (std::size_t i = 0; i < d.cut_count(); ++i) product *= static_cast<unsigned long>(d.cut_index(i));
  return product;
}

std::vector<VertexSet> parts_of(const BlockDecomposition& d, const Assignment& x) {
  if (x.size() != d.cut_count())
    throw DomainError("assignment has " + std::to_string(x.size()) + " entries, expected " +
                      std::to_string(d.cut_count()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& holders = d.membership[i];
    if (!std::binary_search(holders.begin(), holders.end(), x[i]))
      throw DomainError("cut-vertex " + std::to_string(d.cut_vertices[i]) + " is not in block " +
                        std::to_string(x[i] + 1));
  }
  std::vector<VertexSet> parts;
  parts.reserve(d.block_count());
  for (std::size_t b = 0; b < d.block_count(); ++b) {
    std::vector<int> removed;
    for (std::size_t i : d.block_cuts[b])
      if (x[i] != b) removed.push_back(d.cut_vertices[i]);
    parts.push_back(d.blocks[b].minus(VertexSet(std::move(removed))));
  }
  return parts;
}

AssignmentOdometer::AssignmentOdometer(const BlockDecomposition& d) : d_(&d), digits_(d.cut_count(), 0) {}

Assignment AssignmentOdometer::assignment() const {
  Assignment x(digits_.size());
  for (std::size_t i = 0; i < digits_.size(); ++i) x[i] = block_of(i);
  return x;
}

bool AssignmentOdometer::advance(std::size_t& first_changed) {
  for (std::size_t i = digits_.size(); i-- > 0;) {
    if (++digits_[i] < d_->membership[i].size()) {
      first_changed = i;
      return true;
    }
    digits_[i] = 0;
  }
  return false;
}

BPartitionRange::iterator::iterator(const BlockDecomposition& d) : d_(&d), done_(false) {
  odometer_.emplace(d);
  refresh();
}

void BPartitionRange::iterator::refresh() {
  current_.assignment = odometer_->assignment();
  current_.parts = parts_of(*d_, current_.assignment);
}

BPartitionRange::iterator& BPartitionRange::iterator::operator++() {
  std::size_t changed = 0;
  if (odometer_->advance(changed))
    refresh();
  else
    done_ = true;
  return *this;
}

}  // namespace blockdet
