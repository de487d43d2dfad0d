#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "l1pr/graph.hpp"
#include "l1pr/sparse_vector.hpp"

namespace l1pr {

/// Teleportation distribution: positive weights on a few nodes, summing to 1.
class SeedDistribution {
 public:
  /// Validates ids against g, positivity and unit mass (within 1e-12).
  SeedDistribution(const Graph& g, std::vector<std::pair<NodeId, double>> entries);

  /// All mass on one node.
  static SeedDistribution single(const Graph& g, NodeId node);

  /// Binds a parsed seed spec (original file ids) to g.
  static SeedDistribution from_spec(const Graph& g,
                                    const std::vector<std::pair<OriginalId, double>>& spec);

  /// Sorted by node id.
  const std::vector<std::pair<NodeId, double>>& entries() const noexcept { return entries_; }
  double get(NodeId i) const;
  double max_value() const;
  double norm1() const;

 private:
  std::vector<std::pair<NodeId, double>> entries_;
};

/// Parses "42" (unit mass on node 42) or "3:0.5,7:0.5". Ids are original
/// file ids. Throws InvalidInputError on malformed text.
std::vector<std::pair<OriginalId, double>> parse_seed_spec(std::string_view text);

struct SolverParams {
  double alpha = 0.1;
  double rho = 1e-5;
  double epsilon = 0.1;
  std::uint64_t max_iters = 100'000'000;

  /// Throws InvalidInputError when a parameter is out of range.
  void validate() const;
};

/// True when ||s||_inf < rho, the regime where the ISTA locality guarantees
/// are not assured. Logs a warning in that case.
bool warn_if_seed_below_rho(const SeedDistribution& s, const SolverParams& params);

/// (Qq)_i with Q = D^{-1/2}(D - (1-a)/2 (D + A))D^{-1/2}.
double apply_q_entry(const Graph& g, double alpha, const SparseVector& q, NodeId i);

/// f(q) = 1/2 <q, Qq> - alpha <s, D^{-1/2} q>.
double objective_f(const Graph& g, const SolverParams& params, const SeedDistribution& s,
                   const SparseVector& q);

/// Full recomputation of grad f(q) over supp(q), its neighbors and supp(s).
SparseVector gradient_f(const Graph& g, const SolverParams& params, const SeedDistribution& s,
                        const SparseVector& q);

/// psi(q) = rho * alpha * ||D^{1/2} q||_1 + f(q).
double objective_psi(const Graph& g, const SolverParams& params, const SeedDistribution& s,
                     const SparseVector& q);

/// r = D^{1/2} grad.
SparseVector residual_from_gradient(const Graph& g, const SparseVector& grad);
/// grad = D^{-1/2} r.
SparseVector gradient_from_residual(const Graph& g, const SparseVector& r);

/// p = D^{1/2} q.
SparseVector p_from_q(const Graph& g, const SparseVector& q);
/// q = D^{-1/2} p.
SparseVector q_from_p(const Graph& g, const SparseVector& p);

}  // namespace l1pr
