#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "l1pr/graph.hpp"
#include "l1pr/sparse_vector.hpp"

namespace l1pr {

struct SweepProfile {
  /// supp(p) sorted by p(i)/d_i descending, ties by ascending id.
  std::vector<NodeId> order;
  std::vector<double> p_over_d;  ///< aligned with order
  /// One entry per proper-subset prefix: prefix_conductance[k] belongs to
  /// the first k+1 nodes of order.
  std::vector<double> prefix_conductance;
  std::vector<std::uint64_t> prefix_volume;
  std::vector<std::uint64_t> prefix_cut;
  std::size_t best_index = 0;
  NodeSet best_set;
  double best_conductance = 0.0;
};

/// Rounds a nonnegative vector to its minimum-conductance sweep set.
/// Throws InvalidInputError for an empty support or negative entries, and
/// when supp(p) = V leaves no proper prefix (single-node graphs only).
SweepProfile sweep_cut(const Graph& g, const SparseVector& p);

/// CSV rows rank,node_id_original,p_over_d,prefix_volume,prefix_conductance.
void write_profile_csv(const Graph& g, const SweepProfile& profile, std::ostream& out);

}  // namespace l1pr
