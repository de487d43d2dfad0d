#include "l1pr/appr.hpp"

#include <cmath>
#include <deque>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace l1pr {

std::string_view to_string(ApprVariant v) {
  switch (v) {
    case ApprVariant::fifo: return "fifo";
    case ApprVariant::greedy: return "greedy";
    case ApprVariant::heuristic_queue: return "heuristic";
  }
  return "unknown";
}

ApprVariant parse_appr_variant(std::string_view name) {
  if (name == "fifo") return ApprVariant::fifo;
  if (name == "greedy") return ApprVariant::greedy;
  if (name == "heuristic" || name == "heuristic_queue") return ApprVariant::heuristic_queue;
  throw InvalidInputError("unknown APPR variant '" + std::string(name) + "'");
}

SparseVector ppr_residual(const Graph& g, const SolverParams& params, const SeedDistribution& s,
                          const SparseVector& p) {
  SparseVector r;
  for (const auto& [i, si] : s.entries()) r.at(i);
  p.for_each([&](NodeId i, double pi) {
    if (pi == 0.0) return;
    r.at(i);
    for (NodeId j : g.neighbors(i)) r.at(j);
  });
  const double half = (1.0 - params.alpha) / 2.0;
  const auto ids = r.touched();
  auto vals = r.values();
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const NodeId i = ids[k];
    double walk = 0.0;
    for (NodeId j : g.neighbors(i)) {
      const double pj = p.get(j);
      if (pj != 0.0) walk += pj / g.degree(j);
    }
    const double pi = p.get(i);
    vals[k] = pi - half * (pi + walk) - params.alpha * s.get(i);
  }
  return r;
}

namespace {

struct HeapEntry {
  double priority;
  NodeId node;
};

// Max-priority first; equal priorities go to the lowest id.
struct HeapOrder {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.priority != b.priority) return a.priority < b.priority;
    return a.node > b.node;
  }
};

using Heap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapOrder>;

class PushState {
 public:
  PushState(const Graph& g, const SeedDistribution& s, const SolverParams& params,
            const ApprOptions& options)
      : g_(g), params_(params), s_(s), options_(options),
        half_((1.0 - params.alpha) / 2.0) {
    for (const auto& [i, si] : s.entries()) r_.set(i, -params.alpha * si);
  }

  const SparseVector& p() const { return p_; }
  const SparseVector& r() const { return r_; }

  bool violates(NodeId i) const {
    return r_.get(i) < -params_.alpha * g_.degree(i) * params_.rho;
  }
  double priority(NodeId i) const { return -r_.get(i) / g_.degree(i); }

  /// Relaxes node i; `touched_neighbor` is called for each neighbor after its
  /// residual changed.
  template <typename Fn>
  void push(NodeId i, Fn&& touched_neighbor) {
    double& ri_ref = r_.at(i);
    const double ri = ri_ref;
    p_.add(i, -ri);
    ri_ref = half_ * ri;
    const double share = half_ * ri / g_.degree(i);
    for (NodeId j : g_.neighbors(i)) {
      r_.add(j, share);
      touched_neighbor(j);
    }
    ++push_count_;
    if (options_.observer) options_.observer->on_push(i, p_, r_);
    if (options_.residual_check_every != 0 && push_count_ % options_.residual_check_every == 0) {
      check_residual();
    }
  }

  void check_residual() {
    const SparseVector fresh = ppr_residual(g_, params_, s_, p_);
    double drift = 0.0;
    fresh.for_each([&](NodeId i, double v) { drift = std::max(drift, std::abs(v - r_.get(i))); });
    r_.for_each([&](NodeId i, double v) { drift = std::max(drift, std::abs(v - fresh.get(i))); });
    max_drift_ = std::max(max_drift_, drift);
  }

  std::uint64_t push_count() const { return push_count_; }
  bool budget_left() const { return push_count_ < params_.max_iters; }

  ApprResult finish(std::uint64_t iterations) {
    if (options_.residual_check_every != 0) check_residual();
    ApprResult out;
    std::vector<NodeId> touched(r_.touched().begin(), r_.touched().end());
    out.touched_nodes = NodeSet(g_, std::move(touched));
    p_.compact();
    out.p = std::move(p_);
    out.residual = std::move(r_);
    out.iterations = iterations;
    out.push_count = push_count_;
    out.max_residual_drift = max_drift_;
    return out;
  }

  void select(NodeId i, double priority) {
    if (options_.observer) options_.observer->on_select(i, priority, p_, r_);
  }
  void enqueued(NodeId i, double priority) {
    if (options_.observer) options_.observer->on_enqueue(i, priority);
  }

 private:
  const Graph& g_;
  const SolverParams& params_;
  const SeedDistribution& s_;
  const ApprOptions& options_;
  const double half_;
  SparseVector p_;
  SparseVector r_;
  std::uint64_t push_count_ = 0;
  double max_drift_ = 0.0;
};

// Every violating node sits in the queue exactly once.
ApprResult run_fifo(PushState& st, const SeedDistribution& s) {
  std::deque<NodeId> queue;
  std::unordered_set<NodeId> queued;
  auto offer = [&](NodeId j) {
    if (st.violates(j) && queued.insert(j).second) {
      queue.push_back(j);
      st.enqueued(j, st.priority(j));
    }
  };
  for (const auto& [i, si] : s.entries()) offer(i);

  std::uint64_t iterations = 0;
  while (!queue.empty()) {
    if (!st.budget_left()) throw ApprBudgetExhausted(st.finish(iterations));
    const NodeId i = queue.front();
    queue.pop_front();
    queued.erase(i);
    ++iterations;
    st.select(i, st.priority(i));
    st.push(i, offer);
    offer(i);
  }
  return st.finish(iterations);
}

// Lazy-deletion heap: an entry is live iff its priority equals the node's
// current priority and the node still violates.
ApprResult run_greedy(PushState& st, const SeedDistribution& s) {
  Heap heap;
  auto offer = [&](NodeId j) {
    if (st.violates(j)) {
      heap.push({st.priority(j), j});
      st.enqueued(j, st.priority(j));
    }
  };
  for (const auto& [i, si] : s.entries()) offer(i);

  std::uint64_t iterations = 0;
  while (!heap.empty()) {
    const HeapEntry top = heap.top();
    heap.pop();
    ++iterations;
    if (!st.violates(top.node) || top.priority != st.priority(top.node)) continue;
    if (!st.budget_left()) throw ApprBudgetExhausted(st.finish(iterations));
    st.select(top.node, top.priority);
    st.push(top.node, offer);
    offer(top.node);
  }
  return st.finish(iterations);
}

// Priorities are assigned once, on insertion, and never revised while queued.
// Neighbors inherit the popped node's priority; the popped node itself is
// re-inserted with its fresh priority if it still violates.
ApprResult run_heuristic(PushState& st, const SeedDistribution& s) {
  Heap heap;
  std::unordered_set<NodeId> queued;
  auto insert = [&](NodeId j, double priority) {
    if (st.violates(j) && queued.insert(j).second) {
      heap.push({priority, j});
      st.enqueued(j, priority);
    }
  };
  for (const auto& [i, si] : s.entries()) insert(i, st.priority(i));

  std::uint64_t iterations = 0;
  while (!heap.empty()) {
    if (!st.budget_left()) throw ApprBudgetExhausted(st.finish(iterations));
    const HeapEntry top = heap.top();
    heap.pop();
    queued.erase(top.node);
    ++iterations;
    st.select(top.node, top.priority);
    st.push(top.node, [&](NodeId j) { insert(j, top.priority); });
    insert(top.node, st.priority(top.node));
  }
  return st.finish(iterations);
}

}  // namespace

ApprResult appr_solve(const Graph& g, const SeedDistribution& s, const SolverParams& params,
                      ApprVariant variant, const ApprOptions& options) {
  params.validate();
  PushState st(g, s, params, options);
  switch (variant) {
    case ApprVariant::fifo: return run_fifo(st, s);
    case ApprVariant::greedy: return run_greedy(st, s);
    case ApprVariant::heuristic_queue: return run_heuristic(st, s);
  }
  throw InvalidInputError("unknown APPR variant");
}

}  // namespace l1pr
