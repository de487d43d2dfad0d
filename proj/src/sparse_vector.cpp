#include "l1pr/sparse_vector.hpp"

#include <algorithm>
#include <cmath>

namespace l1pr {

void SparseVector::compact() {
  std::size_t out = 0;
  for (std::size_t k = 0; k < ids_.size(); ++k) {
    if (values_[k] == 0.0) continue;
    ids_[out] = ids_[k];
    values_[out] = values_[k];
    ++out;
  }
  ids_.resize(out);
  values_.resize(out);
  slot_.clear();
  for (std::size_t k = 0; k < ids_.size(); ++k) slot_.emplace(ids_[k], k);
}

void SparseVector::clear() {
  slot_.clear();
  ids_.clear();
  values_.clear();
}

std::vector<NodeId> SparseVector::support() const {
  std::vector<NodeId> out;
  for (std::size_t k = 0; k < ids_.size(); ++k) {
    if (values_[k] != 0.0) out.push_back(ids_[k]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t SparseVector::nnz() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](double v) { return v != 0.0; }));
}

double SparseVector::norm1() const {
  double acc = 0.0;
  for (double v : values_) acc += std::abs(v);
  return acc;
}

double SparseVector::norm_inf() const {
  double acc = 0.0;
  for (double v : values_) acc = std::max(acc, std::abs(v));
  return acc;
}

}  // namespace l1pr
