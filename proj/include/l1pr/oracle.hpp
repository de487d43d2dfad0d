#pragma once

// Dense reference solvers for small graphs. They build Q and W explicitly
// and ignore locality entirely, so they share no code path with the sparse
// solvers they check.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "l1pr/graph.hpp"
#include "l1pr/model.hpp"
#include "l1pr/sparse_vector.hpp"

namespace l1pr::oracle {

using DenseVector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

inline constexpr std::size_t kDefaultNodeCap = 2048;

/// Throws OracleCapError when g has more than `cap` nodes.
void require_small(const Graph& g, std::size_t cap);

DenseMatrix adjacency_matrix(const Graph& g);
/// Q = D^{-1/2}(D - (1-alpha)/2 (D + A))D^{-1/2}.
DenseMatrix q_matrix(const Graph& g, double alpha);
/// Lazy walk W = (I + A D^{-1}) / 2.
DenseMatrix walk_matrix(const Graph& g);

DenseVector to_dense(const Graph& g, const SparseVector& v);
DenseVector to_dense(const Graph& g, const SeedDistribution& s);
SparseVector to_sparse(const DenseVector& v);

/// grad f(q) = Qq - alpha D^{-1/2} s.
DenseVector gradient(const Graph& g, const SeedDistribution& s, double alpha,
                     const DenseVector& q);
/// f(q) and psi(q) by dense quadratic forms.
double objective_f(const Graph& g, const SeedDistribution& s, double alpha, const DenseVector& q);
double objective_psi(const Graph& g, const SeedDistribution& s, const SolverParams& params,
                     const DenseVector& q);

/// Solves (I - (1-alpha)W)p = alpha s by LU factorization.
DenseVector exact_ppr(const Graph& g, const SeedDistribution& s, double alpha,
                      std::size_t cap = kDefaultNodeCap);

/// Textbook ISTA on the full vector: q <- prox(q - grad f(q)) with
/// per-coordinate soft threshold rho * alpha * sqrt(d_i), unit step.
class DenseIsta {
 public:
  DenseIsta(const Graph& g, const SeedDistribution& s, const SolverParams& params,
            std::optional<DenseVector> start = std::nullopt, std::size_t cap = kDefaultNodeCap);

  void step();
  const DenseVector& q() const noexcept { return q_; }
  DenseVector gradient() const;
  double last_change() const noexcept { return last_change_; }
  std::uint64_t iteration() const noexcept { return iteration_; }

  /// Coordinates whose pre-threshold value q_i - grad_i is <= -threshold_i,
  /// i.e. would be thresholded to a negative value, at the current iterate.
  std::vector<NodeId> negative_branch() const;

 private:
  DenseMatrix q_mat_;
  DenseVector b_;          // alpha D^{-1/2} s
  DenseVector threshold_;  // rho alpha sqrt(d)
  DenseVector q_;
  double last_change_ = 0.0;
  std::uint64_t iteration_ = 0;
};

struct DenseL1Result {
  DenseVector q;
  std::uint64_t iterations = 0;
};

/// Minimizer of the l1-regularized PageRank objective: DenseIsta run until
/// the l_inf change between iterates is <= 1e-14, or 1e6 iterations
/// (throws std::runtime_error then).
DenseL1Result dense_l1_ppr(const Graph& g, const SeedDistribution& s, const SolverParams& params,
                           std::optional<DenseVector> start = std::nullopt,
                           std::size_t cap = kDefaultNodeCap);

struct KktReport {
  double max_violation = 0.0;
  double positive_branch_violation = 0.0;  ///< max |grad_i + rho alpha sqrt(d_i)| over q_i > 0
  double zero_branch_violation = 0.0;      ///< distance of grad_i to [-rho alpha sqrt(d_i), 0]
  std::optional<NodeId> worst_node;
  std::vector<NodeId> offending;           ///< nodes violating by more than the tolerance
};

/// First-order optimality check for a nonnegative q. Throws
/// InvalidInputError if q has a negative entry.
KktReport check_optimality(const Graph& g, const SeedDistribution& s, const SolverParams& params,
                           const SparseVector& q, double tolerance = 1e-10,
                           std::size_t cap = kDefaultNodeCap);

}  // namespace l1pr::oracle
