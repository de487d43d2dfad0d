#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace l1pr {

using NodeId = std::uint32_t;
/// Node id as it appears in the input file.
using OriginalId = std::uint64_t;

/// Immutable undirected, unweighted graph in compressed adjacency form.
///
/// Nodes are renumbered 0..n-1 in increasing order of their original ids.
/// Every node has positive degree, neighbor ranges are sorted ascending and
/// contain neither self-loops nor duplicates.
class Graph {
 public:
  /// Builds a graph from raw (original-id) edge pairs. Duplicate edges and
  /// self-loops are dropped; nodes left without edges never get an id.
  /// Throws EmptyGraphError when no edge survives.
  static Graph from_edges(std::span<const std::pair<OriginalId, OriginalId>> edges);

  NodeId node_count() const noexcept { return static_cast<NodeId>(degrees_.size()); }
  std::uint64_t edge_count() const noexcept { return neighbors_.size() / 2; }
  /// 2m.
  std::uint64_t total_volume() const noexcept { return neighbors_.size(); }

  std::uint32_t degree(NodeId i) const { return degrees_[i]; }
  double sqrt_degree(NodeId i) const { return sqrt_degrees_[i]; }

  std::span<const NodeId> neighbors(NodeId i) const {
    return {neighbors_.data() + offsets_[i], neighbors_.data() + offsets_[i + 1]};
  }

  bool contains(NodeId i) const noexcept { return i < node_count(); }
  bool has_edge(NodeId u, NodeId v) const;

  OriginalId original_id(NodeId i) const { return original_ids_[i]; }
  std::optional<NodeId> find_node(OriginalId original) const;

  std::span<const std::uint64_t> offsets() const noexcept { return offsets_; }
  std::span<const NodeId> adjacency() const noexcept { return neighbors_; }
  std::span<const std::uint32_t> degrees() const noexcept { return degrees_; }
  std::span<const OriginalId> original_ids() const noexcept { return original_ids_; }

  /// Structural equality (ids, adjacency); the original-id map is ignored.
  bool same_structure(const Graph& other) const;

 private:
  Graph() = default;

  std::vector<std::uint64_t> offsets_;
  std::vector<NodeId> neighbors_;
  std::vector<std::uint32_t> degrees_;
  std::vector<double> sqrt_degrees_;
  std::vector<OriginalId> original_ids_;  // sorted ascending, indexed by NodeId
};

/// Reads '#'-commented "u v" edge-list text.
Graph load_graph(std::istream& in);
Graph load_graph_file(const std::filesystem::path& path);

/// Canonical form: one "u v" line per edge with u < v, lexicographic order,
/// renumbered ids.
void write_edge_list(const Graph& g, std::ostream& out);

/// Sorted unique node set with cached volume.
class NodeSet {
 public:
  NodeSet() = default;
  /// Sorts and dedups `members`. Throws DomainError on out-of-range ids.
  NodeSet(const Graph& g, std::vector<NodeId> members);

  std::span<const NodeId> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::uint64_t volume() const noexcept { return volume_; }
  bool contains(NodeId i) const;

  /// Set difference V \ this.
  NodeSet complement(const Graph& g) const;

  friend bool operator==(const NodeSet&, const NodeSet&) = default;

 private:
  std::vector<NodeId> members_;
  std::uint64_t volume_ = 0;
};

std::uint64_t volume(const Graph& g, std::span<const NodeId> nodes);
std::uint64_t volume(const Graph& g, const NodeSet& s);

/// Number of edges with exactly one endpoint in s.
std::uint64_t cut_size(const Graph& g, const NodeSet& s);

/// cut(S, V\S) / min(vol S, vol V\S). Throws InvalidCutError for S = {} or S = V.
double conductance(const Graph& g, const NodeSet& s);

}  // namespace l1pr
