#include "l1pr/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <unordered_set>

#include "l1pr/errors.hpp"

namespace l1pr {

SweepProfile sweep_cut(const Graph& g, const SparseVector& p) {
  SweepProfile prof;
  std::vector<std::pair<double, NodeId>> keyed;
  p.for_each([&](NodeId i, double v) {
    if (!g.contains(i)) throw DomainError("sweep vector names node outside the graph");
    if (v < 0.0 || std::isnan(v)) throw InvalidInputError("sweep vector has a negative entry");
    if (v > 0.0) keyed.emplace_back(v / g.degree(i), i);
  });
  if (keyed.empty()) throw InvalidInputError("sweep vector has empty support");
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  const std::uint64_t total = g.total_volume();
  const std::size_t prefixes = std::min<std::size_t>(keyed.size(), g.node_count() - 1);
  if (prefixes == 0) throw InvalidInputError("no proper subset prefix to evaluate");

  prof.order.reserve(keyed.size());
  prof.p_over_d.reserve(keyed.size());
  for (const auto& [key, id] : keyed) {
    prof.order.push_back(id);
    prof.p_over_d.push_back(key);
  }

  // Adding node i changes the cut by d_i - 2 * |N(i) within the prefix|.
  std::unordered_set<NodeId> inside;
  inside.reserve(prefixes * 2);
  std::uint64_t vol = 0;
  std::int64_t cut = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < prefixes; ++k) {
    const NodeId i = prof.order[k];
    std::int64_t internal = 0;
    for (NodeId j : g.neighbors(i)) internal += inside.count(j);
    cut += static_cast<std::int64_t>(g.degree(i)) - 2 * internal;
    vol += g.degree(i);
    inside.insert(i);
    const std::uint64_t denom = std::min(vol, total - vol);
    const double phi = static_cast<double>(cut) / static_cast<double>(denom);
    prof.prefix_conductance.push_back(phi);
    prof.prefix_volume.push_back(vol);
    prof.prefix_cut.push_back(static_cast<std::uint64_t>(cut));
    if (phi < best) {
      best = phi;
      prof.best_index = k;
    }
  }
  prof.best_conductance = best;
  prof.best_set = NodeSet(g, std::vector<NodeId>(prof.order.begin(),
                                                 prof.order.begin() + prof.best_index + 1));
  return prof;
}

void write_profile_csv(const Graph& g, const SweepProfile& profile, std::ostream& out) {
  out << "rank,node_id_original,p_over_d,prefix_volume,prefix_conductance\n";
  char buf[160];
  for (std::size_t k = 0; k < profile.prefix_conductance.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%llu,%.17g,%llu,%.17g\n", k,
                  static_cast<unsigned long long>(g.original_id(profile.order[k])),
                  profile.p_over_d[k], static_cast<unsigned long long>(profile.prefix_volume[k]),
                  profile.prefix_conductance[k]);
    out << buf;
  }
}

}  // namespace l1pr
