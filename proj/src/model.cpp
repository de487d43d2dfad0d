#include "l1pr/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "l1pr/errors.hpp"

namespace l1pr {

SeedDistribution::SeedDistribution(const Graph& g,
                                   std::vector<std::pair<NodeId, double>> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) throw InvalidInputError("seed distribution is empty");
  std::sort(entries_.begin(), entries_.end());
  double mass = 0.0;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const auto [id, w] = entries_[k];
    if (!g.contains(id)) throw DomainError("seed node " + std::to_string(id) + " is not in the graph");
    if (k > 0 && entries_[k - 1].first == id) {
      throw InvalidInputError("seed node " + std::to_string(id) + " listed twice");
    }
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidInputError("seed weights must be positive and finite");
    }
    mass += w;
  }
  if (std::abs(mass - 1.0) > 1e-12) {
    throw InvalidInputError("seed weights must sum to 1 (got " + std::to_string(mass) + ")");
  }
}

SeedDistribution SeedDistribution::single(const Graph& g, NodeId node) {
  return SeedDistribution(g, {{node, 1.0}});
}

SeedDistribution SeedDistribution::from_spec(
    const Graph& g, const std::vector<std::pair<OriginalId, double>>& spec) {
  std::vector<std::pair<NodeId, double>> entries;
  entries.reserve(spec.size());
  for (const auto& [orig, w] : spec) {
    const auto id = g.find_node(orig);
    if (!id) throw DomainError("seed node " + std::to_string(orig) + " does not occur in the graph");
    entries.emplace_back(*id, w);
  }
  return SeedDistribution(g, std::move(entries));
}

double SeedDistribution::get(NodeId i) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                                   [](const auto& e, NodeId key) { return e.first < key; });
  return (it != entries_.end() && it->first == i) ? it->second : 0.0;
}

double SeedDistribution::max_value() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, e.second);
  return m;
}

double SeedDistribution::norm1() const {
  double acc = 0.0;
  for (const auto& e : entries_) acc += e.second;
  return acc;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view token, std::string_view what) {
  T value{};
  token = trim(token);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw InvalidInputError("malformed " + std::string(what) + " '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

std::vector<std::pair<OriginalId, double>> parse_seed_spec(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw InvalidInputError("empty seed specification");
  std::vector<std::pair<OriginalId, double>> out;
  if (text.find(':') == std::string_view::npos) {
    if (text.find(',') != std::string_view::npos) {
      throw InvalidInputError("multi-node seeds need node:weight pairs");
    }
    out.emplace_back(parse_number<OriginalId>(text, "seed node id"), 1.0);
    return out;
  }
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw InvalidInputError("seed entry '" + std::string(item) + "' is not node:weight");
    }
    out.emplace_back(parse_number<OriginalId>(item.substr(0, colon), "seed node id"),
                     parse_number<double>(item.substr(colon + 1), "seed weight"));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

void SolverParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInputError("alpha must lie in (0, 1)");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InvalidInputError("rho must be positive");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InvalidInputError("epsilon must lie in [0, 1)");
  if (max_iters == 0) throw InvalidInputError("max_iters must be positive");
}

bool warn_if_seed_below_rho(const SeedDistribution& s, const SolverParams& params) {
  if (s.max_value() >= params.rho) return false;
  spdlog::warn("max seed weight {} is below rho {}; support monotonicity is not guaranteed",
               s.max_value(), params.rho);
  return true;
}

double apply_q_entry(const Graph& g, double alpha, const SparseVector& q, NodeId i) {
  double nb = 0.0;
  for (NodeId j : g.neighbors(i)) {
    const double qj = q.get(j);
    if (qj != 0.0) nb += qj / g.sqrt_degree(j);
  }
  const double half = (1.0 - alpha) / 2.0;
  return (1.0 - half) * q.get(i) - half * nb / g.sqrt_degree(i);
}

double objective_f(const Graph& g, const SolverParams& params, const SeedDistribution& s,
                   const SparseVector& q) {
  double quad = 0.0;
  q.for_each([&](NodeId i, double qi) {
    if (qi != 0.0) quad += qi * apply_q_entry(g, params.alpha, q, i);
  });
  double lin = 0.0;
  for (const auto& [i, si] : s.entries()) lin += si * q.get(i) / g.sqrt_degree(i);
  return 0.5 * quad - params.alpha * lin;
}

SparseVector gradient_f(const Graph& g, const SolverParams& params, const SeedDistribution& s,
                        const SparseVector& q) {
  SparseVector grad;
  for (const auto& [i, si] : s.entries()) grad.at(i);
  q.for_each([&](NodeId i, double qi) {
    if (qi == 0.0) return;
    grad.at(i);
    for (NodeId j : g.neighbors(i)) grad.at(j);
  });
  const auto ids = grad.touched();
  auto vals = grad.values();
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const NodeId i = ids[k];
    vals[k] = apply_q_entry(g, params.alpha, q, i) - params.alpha * s.get(i) / g.sqrt_degree(i);
  }
  return grad;
}

double objective_psi(const Graph& g, const SolverParams& params, const SeedDistribution& s,
                     const SparseVector& q) {
  double l1 = 0.0;
  q.for_each([&](NodeId i, double qi) { l1 += g.sqrt_degree(i) * std::abs(qi); });
  return params.rho * params.alpha * l1 + objective_f(g, params, s, q);
}

namespace {

SparseVector scale_by_sqrt_degree(const Graph& g, const SparseVector& v, bool multiply) {
  SparseVector out;
  v.for_each([&](NodeId i, double x) {
    out.set(i, multiply ? x * g.sqrt_degree(i) : x / g.sqrt_degree(i));
  });
  return out;
}

}  // namespace

SparseVector residual_from_gradient(const Graph& g, const SparseVector& grad) {
  return scale_by_sqrt_degree(g, grad, true);
}

SparseVector gradient_from_residual(const Graph& g, const SparseVector& r) {
  return scale_by_sqrt_degree(g, r, false);
}

SparseVector p_from_q(const Graph& g, const SparseVector& q) {
  return scale_by_sqrt_degree(g, q, true);
}

SparseVector q_from_p(const Graph& g, const SparseVector& p) {
  return scale_by_sqrt_degree(g, p, false);
}

}  // namespace l1pr
