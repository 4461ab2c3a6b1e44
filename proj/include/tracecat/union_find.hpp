#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace tracecat::detail {

// Disjoint sets over 0..n-1. The smaller index always becomes the root, so
// the representative of a class is its least member.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t add() {
    parent_.push_back(parent_.size());
    return parent_.size() - 1;
  }

  std::size_t size() const { return parent_.size(); }

  std::size_t find(std::size_t i) const {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  // Returns true if two distinct classes were merged.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

  bool same(std::size_t a, std::size_t b) const { return find(a) == find(b); }

 private:
  mutable std::vector<std::size_t> parent_;
};

}  // namespace tracecat::detail
