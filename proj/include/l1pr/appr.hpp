#pragma once

#include <cstdint>
#include <string_view>

#include "l1pr/errors.hpp"
#include "l1pr/graph.hpp"
#include "l1pr/model.hpp"
#include "l1pr/sparse_vector.hpp"

namespace l1pr {

/// Coordinate selection rule for the push solver.
enum class ApprVariant {
  fifo,             ///< work queue of violating nodes, first in first out
  greedy,           ///< largest |r(i)|/d_i among violators, ties to lowest id
  heuristic_queue,  ///< priority fixed at insertion, inherited from the popped node
};

std::string_view to_string(ApprVariant v);
/// Accepts "fifo", "greedy", "heuristic" (also "heuristic_queue").
ApprVariant parse_appr_variant(std::string_view name);

struct ApprResult {
  SparseVector p;         ///< approximate PPR vector, p = D^{1/2} q
  SparseVector residual;  ///< r = (I - (1-alpha)W)p - alpha s, on touched nodes
  std::uint64_t iterations = 0;  ///< selection-loop passes, stale heap pops included
  std::uint64_t push_count = 0;  ///< coordinate relaxations
  NodeSet touched_nodes;
  /// Largest |r_incremental - r_recomputed| seen at the periodic checks.
  double max_residual_drift = 0.0;
};

/// Hooks for instrumented runs. Called synchronously from the solver loop.
class ApprObserver {
 public:
  virtual ~ApprObserver() = default;
  virtual void on_enqueue(NodeId /*node*/, double /*priority*/) {}
  /// Before relaxing `node`; p and r are the pre-push state.
  virtual void on_select(NodeId /*node*/, double /*priority*/, const SparseVector& /*p*/,
                         const SparseVector& /*r*/) {}
  /// After relaxing `node`; p and r are the post-push state.
  virtual void on_push(NodeId /*node*/, const SparseVector& /*p*/, const SparseVector& /*r*/) {}
};

struct ApprOptions {
  ApprObserver* observer = nullptr;
  /// Recompute the residual from p every this many pushes (0 = never).
  std::uint64_t residual_check_every = 0;
};

class ApprBudgetExhausted : public BudgetExhaustedError {
 public:
  explicit ApprBudgetExhausted(ApprResult partial)
      : BudgetExhaustedError("APPR exceeded its push budget"), partial_(std::move(partial)) {}
  const ApprResult& partial() const noexcept { return partial_; }

 private:
  ApprResult partial_;
};

/// Push solver for (I - (1-alpha)W)p = alpha s, stopped once
/// ||D^{-1} r||_inf <= rho * alpha. `params.epsilon` is unused.
ApprResult appr_solve(const Graph& g, const SeedDistribution& s, const SolverParams& params,
                      ApprVariant variant = ApprVariant::fifo, const ApprOptions& options = {});

/// Residual (I - (1-alpha)W)p - alpha s recomputed from scratch, on
/// supp(p), its neighbors and supp(s).
SparseVector ppr_residual(const Graph& g, const SolverParams& params, const SeedDistribution& s,
                          const SparseVector& p);

}  // namespace l1pr
