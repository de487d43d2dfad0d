#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_set>
#include <vector>

#include "l1pr/errors.hpp"
#include "l1pr/graph.hpp"
#include "l1pr/model.hpp"
#include "l1pr/sparse_vector.hpp"

namespace l1pr {

struct IstaOptions {
  /// Replace the incremental gradient by a full recomputation every this
  /// many iterations (0 = never). The observed drift is logged.
  std::uint64_t refresh_every = 1000;
  /// Measure (without replacing) incremental-vs-full gradient drift every
  /// this many iterations (0 = never).
  std::uint64_t drift_check_every = 0;
  /// CSV trace sink: iteration,active_size,psi,scaled_grad_inf.
  std::ostream* trace = nullptr;
};

/// Iterate of the locality-preserving ISTA solver.
///
/// `grad` holds an entry for every node the solver has read or written; all
/// other entries of grad f(q) are -alpha s(i)/sqrt(d_i) = 0 by construction.
struct IstaState {
  SparseVector q;
  SparseVector grad;
  std::vector<NodeId> active;  ///< S_k in order of entry
  std::unordered_set<NodeId> active_lookup;
  std::uint64_t iteration = 0;

  bool in_active(NodeId i) const { return active_lookup.count(i) != 0; }
};

struct IstaResult {
  SparseVector p;  ///< D^{1/2} q
  SparseVector q;
  std::uint64_t iterations = 0;
  NodeSet touched_nodes;
  NodeSet support;
  NodeSet active_set;
  double grad_inf_norm_scaled = 0.0;  ///< ||D^{-1/2} grad f(q)||_inf at exit
  double max_gradient_drift = 0.0;    ///< relative, over all drift checks and refreshes
};

class IstaBudgetExhausted : public BudgetExhaustedError {
 public:
  explicit IstaBudgetExhausted(IstaResult partial)
      : BudgetExhaustedError("ISTA exceeded its iteration budget"), partial_(std::move(partial)) {}
  const IstaResult& partial() const noexcept { return partial_; }

 private:
  IstaResult partial_;
};

/// Proximal-gradient solver for the l1-regularized PageRank problem
///   minimize rho*alpha*||D^{1/2} q||_1 + f(q)
/// started from q = 0 with unit step. Each step reads and writes only the
/// active set S_k and its neighbors.
class IstaSolver {
 public:
  IstaSolver(const Graph& g, const SeedDistribution& s, const SolverParams& params,
             IstaOptions options = {});

  /// ||D^{-1/2} grad f(q_k)||_inf <= (1+eps) rho alpha.
  bool converged() const { return scaled_grad_inf_ <= stop_threshold_; }
  double scaled_grad_inf_norm() const { return scaled_grad_inf_; }

  /// One proximal-gradient iteration.
  void step();

  /// Steps until converged; throws IstaBudgetExhausted past max_iters.
  IstaResult run();

  const IstaState& state() const noexcept { return state_; }
  IstaResult result() const;

  /// Incremental gradient vs. full recomputation: max abs deviation divided
  /// by max(||full||_inf, 1e-300).
  double gradient_drift() const;

 private:
  void update_scaled_norm();
  void refresh_gradient();
  void write_trace();

  const Graph& g_;
  SeedDistribution s_;
  SolverParams params_;
  IstaOptions options_;
  double half_;
  double stop_threshold_;
  IstaState state_;
  SparseVector scratch_;
  std::vector<double> delta_;
  double scaled_grad_inf_ = 0.0;
  double max_drift_ = 0.0;
};

IstaResult ista_solve(const Graph& g, const SeedDistribution& s, const SolverParams& params,
                      IstaOptions options = {});

}  // namespace l1pr
