#include "l1pr/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "l1pr/errors.hpp"

namespace l1pr::oracle {

void require_small(const Graph& g, std::size_t cap) {
  if (g.node_count() > cap) {
    throw OracleCapError("dense oracle refuses graphs with more than " + std::to_string(cap) +
                         " nodes (got " + std::to_string(g.node_count()) + ")");
  }
}

DenseMatrix adjacency_matrix(const Graph& g) {
  const Eigen::Index n = g.node_count();
  DenseMatrix a = DenseMatrix::Zero(n, n);
  for (NodeId i = 0; i < g.node_count(); ++i) {
    for (NodeId j : g.neighbors(i)) a(i, j) = 1.0;
  }
  return a;
}

DenseMatrix q_matrix(const Graph& g, double alpha) {
  const Eigen::Index n = g.node_count();
  DenseVector d(n), inv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i) = g.degree(static_cast<NodeId>(i));
    inv_sqrt(i) = 1.0 / std::sqrt(d(i));
  }
  const DenseMatrix inner =
      DenseMatrix(d.asDiagonal()) - 0.5 * (1.0 - alpha) * (DenseMatrix(d.asDiagonal()) + adjacency_matrix(g));
  return inv_sqrt.asDiagonal() * inner * inv_sqrt.asDiagonal();
}

DenseMatrix walk_matrix(const Graph& g) {
  const Eigen::Index n = g.node_count();
  DenseVector inv_d(n);
  for (Eigen::Index i = 0; i < n; ++i) inv_d(i) = 1.0 / g.degree(static_cast<NodeId>(i));
  return 0.5 * (DenseMatrix::Identity(n, n) + adjacency_matrix(g) * inv_d.asDiagonal());
}

DenseVector to_dense(const Graph& g, const SparseVector& v) {
  DenseVector out = DenseVector::Zero(g.node_count());
  v.for_each([&](NodeId i, double x) {
    if (!g.contains(i)) throw DomainError("vector entry outside the graph");
    out(i) = x;
  });
  return out;
}

DenseVector to_dense(const Graph& g, const SeedDistribution& s) {
  DenseVector out = DenseVector::Zero(g.node_count());
  for (const auto& [i, w] : s.entries()) out(i) = w;
  return out;
}

SparseVector to_sparse(const DenseVector& v) {
  SparseVector out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0.0) out.set(static_cast<NodeId>(i), v(i));
  }
  return out;
}

namespace {

DenseVector scaled_seed(const Graph& g, const SeedDistribution& s, double alpha) {
  DenseVector b = to_dense(g, s);
  for (Eigen::Index i = 0; i < b.size(); ++i) b(i) *= alpha / std::sqrt(double(g.degree(NodeId(i))));
  return b;
}

DenseVector sqrt_degrees(const Graph& g) {
  DenseVector out(g.node_count());
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = std::sqrt(double(g.degree(NodeId(i))));
  return out;
}

}  // namespace

DenseVector gradient(const Graph& g, const SeedDistribution& s, double alpha,
                     const DenseVector& q) {
  return q_matrix(g, alpha) * q - scaled_seed(g, s, alpha);
}

double objective_f(const Graph& g, const SeedDistribution& s, double alpha, const DenseVector& q) {
  return 0.5 * q.dot(q_matrix(g, alpha) * q) - scaled_seed(g, s, alpha).dot(q);
}

double objective_psi(const Graph& g, const SeedDistribution& s, const SolverParams& params,
                     const DenseVector& q) {
  const double l1 = sqrt_degrees(g).cwiseProduct(q.cwiseAbs()).sum();
  return params.rho * params.alpha * l1 + objective_f(g, s, params.alpha, q);
}

DenseVector exact_ppr(const Graph& g, const SeedDistribution& s, double alpha, std::size_t cap) {
  require_small(g, cap);
  const Eigen::Index n = g.node_count();
  const DenseMatrix system = DenseMatrix::Identity(n, n) - (1.0 - alpha) * walk_matrix(g);
  const DenseVector rhs = alpha * to_dense(g, s);
  return system.partialPivLu().solve(rhs);
}

DenseIsta::DenseIsta(const Graph& g, const SeedDistribution& s, const SolverParams& params,
                     std::optional<DenseVector> start, std::size_t cap) {
  require_small(g, cap);
  q_mat_ = q_matrix(g, params.alpha);
  b_ = scaled_seed(g, s, params.alpha);
  threshold_ = params.rho * params.alpha * sqrt_degrees(g);
  q_ = start ? *start : DenseVector::Zero(g.node_count());
  if (q_.size() != Eigen::Index(g.node_count())) {
    throw InvalidInputError("starting point has the wrong length");
  }
}

DenseVector DenseIsta::gradient() const { return q_mat_ * q_ - b_; }

void DenseIsta::step() {
  const DenseVector z = q_ - gradient();
  DenseVector next(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double t = threshold_(i);
    if (z(i) >= t) {
      next(i) = z(i) - t;
    } else if (z(i) <= -t) {
      next(i) = z(i) + t;
    } else {
      next(i) = 0.0;
    }
  }
  last_change_ = (next - q_).lpNorm<Eigen::Infinity>();
  q_ = std::move(next);
  ++iteration_;
}

std::vector<NodeId> DenseIsta::negative_branch() const {
  const DenseVector z = q_ - gradient();
  std::vector<NodeId> out;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z(i) <= -threshold_(i)) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

DenseL1Result dense_l1_ppr(const Graph& g, const SeedDistribution& s, const SolverParams& params,
                           std::optional<DenseVector> start, std::size_t cap) {
  DenseIsta ista(g, s, params, std::move(start), cap);
  constexpr std::uint64_t kMaxIterations = 1'000'000;
  while (ista.iteration() < kMaxIterations) {
    ista.step();
    if (ista.last_change() <= 1e-14) return {ista.q(), ista.iteration()};
  }
  throw std::runtime_error("dense l1 oracle did not stagnate within 1e6 iterations");
}

KktReport check_optimality(const Graph& g, const SeedDistribution& s, const SolverParams& params,
                           const SparseVector& q, double tolerance, std::size_t cap) {
  require_small(g, cap);
  const DenseVector qd = to_dense(g, q);
  if ((qd.array() < 0.0).any()) throw InvalidInputError("optimality check needs q >= 0");
  const DenseVector grad = gradient(g, s, params.alpha, qd);
  const DenseVector thr = params.rho * params.alpha * sqrt_degrees(g);

  KktReport rep;
  for (Eigen::Index i = 0; i < qd.size(); ++i) {
    double v = 0.0;
    if (qd(i) > 0.0) {
      v = std::abs(grad(i) + thr(i));
      rep.positive_branch_violation = std::max(rep.positive_branch_violation, v);
    } else {
      v = std::max({0.0, grad(i), -thr(i) - grad(i)});
      rep.zero_branch_violation = std::max(rep.zero_branch_violation, v);
    }
    if (v > rep.max_violation) {
      rep.max_violation = v;
      rep.worst_node = static_cast<NodeId>(i);
    }
    if (v > tolerance) rep.offending.push_back(static_cast<NodeId>(i));
  }
  return rep;
}

}  // namespace l1pr::oracle
