#pragma once

// Small fixture graphs, random generators and brute-force helpers shared by
// the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "l1pr/graph.hpp"
#include "l1pr/model.hpp"
#include "l1pr/sparse_vector.hpp"

namespace l1pr::testing {

using EdgeList = std::vector<std::pair<OriginalId, OriginalId>>;

inline Graph graph_from(const EdgeList& edges) { return Graph::from_edges(edges); }

inline Graph path2() { return graph_from({{0, 1}}); }
inline Graph triangle() { return graph_from({{0, 1}, {1, 2}, {2, 0}}); }
inline Graph barbell() {
  return graph_from({{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 3}});
}
inline Graph two_triangles() {
  return graph_from({{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
}
inline Graph complete(OriginalId n) {
  EdgeList e;
  for (OriginalId i = 0; i < n; ++i)
    for (OriginalId j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return graph_from(e);
}

inline bool is_connected(const Graph& g) {
  std::vector<char> seen(g.node_count(), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == g.node_count();
}

/// G(n, p) edges; may leave isolated nodes (dropped at load).
inline EdgeList erdos_renyi_edges(OriginalId n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  EdgeList e;
  for (OriginalId i = 0; i < n; ++i)
    for (OriginalId j = i + 1; j < n; ++j)
      if (coin(rng)) e.emplace_back(i, j);
  return e;
}

/// Connected G(n, p) with p = c * ln(n) / n (c > 1), resampled until connected.
inline Graph connected_erdos_renyi(OriginalId n, std::mt19937_64& rng, double c = 2.0) {
  const double p = std::min(1.0, c * std::log(double(n)) / double(n));
  for (;;) {
    EdgeList e = erdos_renyi_edges(n, p, rng);
    if (e.empty()) continue;
    Graph g = graph_from(e);
    if (g.node_count() == n && is_connected(g)) return g;
  }
}

/// Sparse random graph on n nodes with about n * avg_degree / 2 edges,
/// built from random pairs (fast for large n). Ids 0..n-1; nodes left
/// isolated are dropped at load.
inline EdgeList sparse_random_edges(OriginalId n, double avg_degree, std::mt19937_64& rng,
                                    OriginalId id_offset = 0) {
  std::uniform_int_distribution<OriginalId> pick(0, n - 1);
  const auto m = static_cast<std::uint64_t>(double(n) * avg_degree / 2.0);
  EdgeList e;
  e.reserve(m + n);
  // A ring keeps every node present and the host connected.
  for (OriginalId i = 0; i < n; ++i) e.emplace_back(id_offset + i, id_offset + (i + 1) % n);
  for (std::uint64_t k = 0; k < m; ++k) e.emplace_back(id_offset + pick(rng), id_offset + pick(rng));
  return e;
}

/// Brute-force conductance by enumerating all node pairs.
inline double brute_conductance(const Graph& g, const std::vector<char>& in_set) {
  std::uint64_t cut = 0, vol_in = 0, vol_out = 0;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    for (NodeId j = 0; j < g.node_count(); ++j) {
      if (i == j || !g.has_edge(i, j)) continue;
      (in_set[i] ? vol_in : vol_out) += 1;
      if (in_set[i] && !in_set[j]) ++cut;
    }
  }
  return double(cut) / double(std::min(vol_in, vol_out));
}

inline std::vector<char> indicator(const Graph& g, std::span<const NodeId> nodes) {
  std::vector<char> in(g.node_count(), 0);
  for (NodeId i : nodes) in[i] = 1;
  return in;
}

inline SparseVector sparse(std::initializer_list<std::pair<NodeId, double>> entries) {
  SparseVector v;
  for (const auto& [i, x] : entries) v.set(i, x);
  return v;
}

inline double max_abs_diff(const SparseVector& a, const SparseVector& b) {
  double m = 0.0;
  a.for_each([&](NodeId i, double x) { m = std::max(m, std::abs(x - b.get(i))); });
  b.for_each([&](NodeId i, double x) { m = std::max(m, std::abs(x - a.get(i))); });
  return m;
}

/// Random seed node in g.
inline NodeId random_node(const Graph& g, std::mt19937_64& rng) {
  return std::uniform_int_distribution<NodeId>(0, g.node_count() - 1)(rng);
}

}  // namespace l1pr::testing
