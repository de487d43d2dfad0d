#include "l1pr/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "l1pr/errors.hpp"

namespace l1pr {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

// Parses the next whitespace-delimited token of `line` starting at `pos` as an
// unsigned integer. Returns false when no token remains.
bool next_token(std::string_view line, std::size_t& pos, std::size_t line_no,
                OriginalId& value) {
  while (pos < line.size() && is_space(line[pos])) ++pos;
  if (pos == line.size()) return false;
  std::size_t end = pos;
  while (end < line.size() && !is_space(line[end])) ++end;
  const std::string_view token = line.substr(pos, end - pos);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line_no, "expected a nonnegative integer node id, got '" +
                                  std::string(token) + "'");
  }
  pos = end;
  return true;
}

}  // namespace

Graph Graph::from_edges(std::span<const std::pair<OriginalId, OriginalId>> edges) {
  std::vector<std::pair<OriginalId, OriginalId>> canon;
  canon.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    canon.emplace_back(u, v);
  }
  std::sort(canon.begin(), canon.end());
  canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
  if (canon.empty()) throw EmptyGraphError("graph has no edges after removing self-loops");

  Graph g;
  g.original_ids_.reserve(canon.size());
  for (const auto& [u, v] : canon) {
    g.original_ids_.push_back(u);
    g.original_ids_.push_back(v);
  }
  std::sort(g.original_ids_.begin(), g.original_ids_.end());
  g.original_ids_.erase(std::unique(g.original_ids_.begin(), g.original_ids_.end()),
                        g.original_ids_.end());
  g.original_ids_.shrink_to_fit();

  const std::size_t n = g.original_ids_.size();
  auto remap = [&](OriginalId id) {
    return static_cast<NodeId>(
        std::lower_bound(g.original_ids_.begin(), g.original_ids_.end(), id) -
        g.original_ids_.begin());
  };

  std::vector<std::pair<NodeId, NodeId>> local;
  local.reserve(canon.size());
  g.degrees_.assign(n, 0);
  for (const auto& [u, v] : canon) {
    const NodeId a = remap(u), b = remap(v);
    local.emplace_back(a, b);
    ++g.degrees_[a];
    ++g.degrees_[b];
  }
  canon.clear();
  canon.shrink_to_fit();

  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + g.degrees_[i];
  g.neighbors_.resize(g.offsets_[n]);
  std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [a, b] : local) {
    g.neighbors_[cursor[a]++] = b;
    g.neighbors_[cursor[b]++] = a;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
              g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
  }

  g.sqrt_degrees_.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.sqrt_degrees_[i] = std::sqrt(double(g.degrees_[i]));
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<NodeId> Graph::find_node(OriginalId original) const {
  const auto it = std::lower_bound(original_ids_.begin(), original_ids_.end(), original);
  if (it == original_ids_.end() || *it != original) return std::nullopt;
  return static_cast<NodeId>(it - original_ids_.begin());
}

bool Graph::same_structure(const Graph& other) const {
  return offsets_ == other.offsets_ && neighbors_ == other.neighbors_ &&
         degrees_ == other.degrees_;
}

Graph load_graph(std::istream& in) {
  std::vector<std::pair<OriginalId, OriginalId>> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t pos = 0;
    while (pos < line.size() && is_space(line[pos])) ++pos;
    if (pos == line.size() || line[pos] == '#') continue;
    OriginalId u = 0, v = 0, extra = 0;
    next_token(line, pos, line_no, u);
    if (!next_token(line, pos, line_no, v)) {
      throw ParseError(line_no, "expected two node ids, got one");
    }
    if (next_token(line, pos, line_no, extra)) {
      throw ParseError(line_no, "expected two node ids, got more");
    }
    edges.emplace_back(u, v);
  }
  if (in.bad()) throw std::runtime_error("read error while loading graph");
  return Graph::from_edges(edges);
}

Graph load_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file '" + path.string() + "'");
  return load_graph(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (u < v) out << u << ' ' << v << '\n';
    }
  }
}

NodeSet::NodeSet(const Graph& g, std::vector<NodeId> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (!members_.empty() && !g.contains(members_.back())) {
    throw DomainError("node " + std::to_string(members_.back()) + " is not in the graph (n=" +
                      std::to_string(g.node_count()) + ")");
  }
  for (NodeId i : members_) volume_ += g.degree(i);
}

bool NodeSet::contains(NodeId i) const {
  return std::binary_search(members_.begin(), members_.end(), i);
}

NodeSet NodeSet::complement(const Graph& g) const {
  std::vector<NodeId> rest;
  rest.reserve(g.node_count() - members_.size());
  auto it = members_.begin();
  for (NodeId i = 0; i < g.node_count(); ++i) {
    if (it != members_.end() && *it == i) {
      ++it;
    } else {
      rest.push_back(i);
    }
  }
  return NodeSet(g, std::move(rest));
}

std::uint64_t volume(const Graph& g, std::span<const NodeId> nodes) {
  std::uint64_t vol = 0;
  for (NodeId i : nodes) {
    if (!g.contains(i)) throw DomainError("node " + std::to_string(i) + " is not in the graph");
    vol += g.degree(i);
  }
  return vol;
}

std::uint64_t volume(const Graph& g, const NodeSet& s) { return volume(g, s.members()); }

std::uint64_t cut_size(const Graph& g, const NodeSet& s) {
  std::uint64_t cut = 0;
  for (NodeId i : s.members()) {
    for (NodeId j : g.neighbors(i)) {
      if (!s.contains(j)) ++cut;
    }
  }
  return cut;
}

double conductance(const Graph& g, const NodeSet& s) {
  const std::uint64_t vol = volume(g, s);
  if (s.empty() || s.size() == g.node_count()) {
    throw InvalidCutError("conductance needs a nonempty proper subset of the nodes");
  }
  const std::uint64_t denom = std::min(vol, g.total_volume() - vol);
  return static_cast<double>(cut_size(g, s)) / static_cast<double>(denom);
}

}  // namespace l1pr
