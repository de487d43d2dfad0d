#pragma once

#include <cstddef>
#include <span>
#include <unordered_map>
#include <vector>

#include "l1pr/graph.hpp"

namespace l1pr {

/// Sparse real vector over node ids.
///
/// Keys are kept in insertion order (`touched()`), so iteration is
/// deterministic and independent of the hash layout. Storage grows with the
/// number of keys touched, never with the graph size.
class SparseVector {
 public:
  SparseVector() = default;

  double get(NodeId i) const {
    const auto it = slot_.find(i);
    return it == slot_.end() ? 0.0 : values_[it->second];
  }

  /// Reference to entry i, creating a zero entry if absent.
  double& at(NodeId i) {
    const auto [it, inserted] = slot_.try_emplace(i, ids_.size());
    if (inserted) {
      ids_.push_back(i);
      values_.push_back(0.0);
    }
    return values_[it->second];
  }

  void set(NodeId i, double v) { at(i) = v; }
  void add(NodeId i, double v) { at(i) += v; }

  bool has(NodeId i) const { return slot_.count(i) != 0; }
  std::size_t touched_count() const noexcept { return ids_.size(); }
  std::span<const NodeId> touched() const noexcept { return ids_; }
  /// Values aligned with touched().
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  /// Drops explicit zeros, preserving the relative order of the rest.
  void compact();
  void clear();

  /// Ids with nonzero value, ascending.
  std::vector<NodeId> support() const;
  std::size_t nnz() const;

  double norm1() const;
  double norm_inf() const;

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t k = 0; k < ids_.size(); ++k) fn(ids_[k], values_[k]);
  }

 private:
  std::unordered_map<NodeId, std::size_t> slot_;
  std::vector<NodeId> ids_;
  std::vector<double> values_;
};

}  // namespace l1pr
