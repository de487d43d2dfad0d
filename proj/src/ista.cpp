#include "l1pr/ista.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <spdlog/spdlog.h>

namespace l1pr {

IstaSolver::IstaSolver(const Graph& g, const SeedDistribution& s, const SolverParams& params,
                       IstaOptions options)
    : g_(g), s_(s), params_(params), options_(options),
      half_((1.0 - params.alpha) / 2.0),
      stop_threshold_((1.0 + params.epsilon) * params.rho * params.alpha) {
  params_.validate();
  warn_if_seed_below_rho(s_, params_);

  for (const auto& [i, si] : s_.entries()) {
    const double gi = -params_.alpha * si / g_.sqrt_degree(i);
    state_.grad.set(i, gi);
    // q_0 = 0, so membership reduces to -grad_i >= rho alpha sqrt(d_i).
    if (-gi >= params_.rho * params_.alpha * g_.sqrt_degree(i)) {
      state_.active.push_back(i);
      state_.active_lookup.insert(i);
    }
  }
  update_scaled_norm();
  write_trace();
}

void IstaSolver::update_scaled_norm() {
  double m = 0.0;
  const auto ids = state_.grad.touched();
  const auto vals = state_.grad.values();
  for (std::size_t k = 0; k < ids.size(); ++k) {
    m = std::max(m, std::abs(vals[k]) / g_.sqrt_degree(ids[k]));
  }
  scaled_grad_inf_ = m;
}

void IstaSolver::step() {
  const double ra = params_.rho * params_.alpha;
  const auto& active = state_.active;

  // Delta q on S_k, and the walk term sum_{l in S_k, l ~ j} dq_l / sqrt(d_l).
  delta_.resize(active.size());
  scratch_.clear();
  for (std::size_t k = 0; k < active.size(); ++k) {
    const NodeId i = active[k];
    const double dq = -(state_.grad.get(i) + ra * g_.sqrt_degree(i));
    delta_[k] = dq;
    state_.q.add(i, dq);
    const double spread = dq / g_.sqrt_degree(i);
    for (NodeId j : g_.neighbors(i)) scratch_.add(j, spread);
  }

  for (std::size_t k = 0; k < active.size(); ++k) {
    const NodeId i = active[k];
    const double inv = 1.0 / g_.sqrt_degree(i);
    state_.grad.set(i, -ra * g_.sqrt_degree(i) - half_ * delta_[k] -
                           half_ * inv * scratch_.get(i));
  }

  const auto ids = scratch_.touched();
  const auto sums = scratch_.values();
  std::vector<NodeId> entering;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const NodeId j = ids[k];
    if (state_.in_active(j)) continue;
    double& gj = state_.grad.at(j);
    gj -= half_ / g_.sqrt_degree(j) * sums[k];
    if (state_.q.get(j) - gj >= ra * g_.sqrt_degree(j)) entering.push_back(j);
  }
  for (NodeId j : entering) {
    state_.active.push_back(j);
    state_.active_lookup.insert(j);
  }

  ++state_.iteration;
  const std::uint64_t k = state_.iteration;
  if (options_.drift_check_every != 0 && k % options_.drift_check_every == 0) {
    max_drift_ = std::max(max_drift_, gradient_drift());
  }
  if (options_.refresh_every != 0 && k % options_.refresh_every == 0) refresh_gradient();
  update_scaled_norm();
  write_trace();
}

double IstaSolver::gradient_drift() const {
  const SparseVector full = gradient_f(g_, params_, s_, state_.q);
  double diff = 0.0;
  double scale = 1e-300;
  state_.grad.for_each([&](NodeId i, double v) {
    const double ref = full.get(i);
    diff = std::max(diff, std::abs(v - ref));
    scale = std::max(scale, std::abs(ref));
  });
  full.for_each([&](NodeId i, double ref) {
    diff = std::max(diff, std::abs(ref - state_.grad.get(i)));
    scale = std::max(scale, std::abs(ref));
  });
  return diff / scale;
}

// The recomputed values are clipped to the sign pattern every iterate
// satisfies (grad <= 0, and grad_i <= -rho alpha sqrt(d_i) on S_k), so
// rounding in the refresh cannot shrink q or evict a member of S_k.
void IstaSolver::refresh_gradient() {
  const double drift = gradient_drift();
  max_drift_ = std::max(max_drift_, drift);
  spdlog::debug("ista: gradient refresh at iteration {}, relative drift {:.3e}",
                state_.iteration, drift);
  const double ra = params_.rho * params_.alpha;
  const auto ids = state_.grad.touched();
  auto vals = state_.grad.values();
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const NodeId i = ids[k];
    const double full = apply_q_entry(g_, params_.alpha, state_.q, i) -
                        params_.alpha * s_.get(i) / g_.sqrt_degree(i);
    const double cap = state_.in_active(i) ? -ra * g_.sqrt_degree(i) : 0.0;
    vals[k] = std::min(full, cap);
  }
}

void IstaSolver::write_trace() {
  if (options_.trace == nullptr) return;
  std::ostream& out = *options_.trace;
  if (state_.iteration == 0) out << "iteration,active_size,psi,scaled_grad_inf\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "%llu,%zu,%.17g,%.17g\n",
                static_cast<unsigned long long>(state_.iteration), state_.active.size(),
                objective_psi(g_, params_, s_, state_.q), scaled_grad_inf_);
  out << buf;
}

IstaResult IstaSolver::result() const {
  IstaResult out;
  out.q = state_.q;
  out.q.compact();
  out.p = p_from_q(g_, out.q);
  out.iterations = state_.iteration;
  out.touched_nodes = NodeSet(
      g_, std::vector<NodeId>(state_.grad.touched().begin(), state_.grad.touched().end()));
  out.support = NodeSet(g_, out.q.support());
  out.active_set = NodeSet(g_, state_.active);
  out.grad_inf_norm_scaled = scaled_grad_inf_;
  out.max_gradient_drift = max_drift_;
  return out;
}

IstaResult IstaSolver::run() {
  while (!converged()) {
    if (state_.iteration >= params_.max_iters) throw IstaBudgetExhausted(result());
    step();
  }
  return result();
}

IstaResult ista_solve(const Graph& g, const SeedDistribution& s, const SolverParams& params,
                      IstaOptions options) {
  IstaSolver solver(g, s, params, options);
  return solver.run();
}

}  // namespace l1pr
