#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "l1pr/appr.hpp"
#include "l1pr/errors.hpp"
#include "l1pr/ista.hpp"
#include "l1pr/oracle.hpp"

namespace l1pr::cli {

using nlohmann::json;

std::string_view to_string(Method m) {
  switch (m) {
    case Method::ista: return "ista";
    case Method::appr_fifo: return "appr-fifo";
    case Method::appr_greedy: return "appr-greedy";
    case Method::appr_heuristic: return "appr-heuristic";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::ista, Method::appr_fifo, Method::appr_greedy, Method::appr_heuristic}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidInputError("unknown method '" + std::string(name) + "'");
}

std::vector<Method> parse_methods(std::string_view name) {
  if (name == "all") {
    return {Method::ista, Method::appr_fifo, Method::appr_greedy, Method::appr_heuristic};
  }
  return {parse_method(name)};
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Thrown for seed specs that do not parse or do not name a graph node.
struct SeedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SeedDistribution bind_seed(const Graph& g, const std::string& spec) {
  try {
    return SeedDistribution::from_spec(g, parse_seed_spec(spec));
  } catch (const std::exception& e) {
    throw SeedError("invalid seed '" + spec + "': " + e.what());
  }
}

int report_error(std::ostream& err) {
  try {
    throw;
  } catch (const SeedError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidSeed;
  } catch (const OracleCapError& e) {
    err << "error: " << e.what() << '\n';
    return kOracleRefused;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kIoError;
  } catch (const EmptyGraphError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const InvalidInputError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const InvalidCutError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  file << text;
}

json config_json(const RunConfig& cfg) {
  json c;
  c["graph"] = cfg.graph_path;
  c["seeds"] = cfg.seeds;
  c["method"] = cfg.method;
  c["alpha"] = cfg.params.alpha;
  c["rho"] = cfg.params.rho;
  c["epsilon"] = cfg.params.epsilon;
  c["max_iters"] = cfg.params.max_iters;
  return c;
}

json stats_json(const RunConfig& cfg, const MethodRun& run) {
  json s;
  s["iterations"] = run.iterations;
  s["touched"] = run.touched;
  s["touched_volume"] = run.touched_volume;
  s["nnz"] = run.nnz;
  s["wall_ms"] = cfg.timing ? json(run.wall_ms) : json(nullptr);
  s["budget_exhausted"] = run.budget_exhausted;
  return s;
}

std::vector<OriginalId> best_nodes(const Graph& g, const MethodRun& run) {
  std::vector<OriginalId> ids;
  if (!run.profile) return ids;
  for (NodeId i : run.profile->best_set.members()) ids.push_back(g.original_id(i));
  std::sort(ids.begin(), ids.end());
  return ids;
}

json best_cut_json(const Graph& g, const MethodRun& run) {
  json b;
  if (!run.profile) {
    b["nodes"] = json::array();
    b["conductance"] = nullptr;
    b["volume"] = nullptr;
    return b;
  }
  b["nodes"] = best_nodes(g, run);
  b["conductance"] = run.profile->best_conductance;
  b["volume"] = run.profile->best_set.volume();
  return b;
}

std::string timing_text(const RunConfig& cfg, const MethodRun& run) {
  return cfg.timing ? fmt17(run.wall_ms) : std::string();
}

}  // namespace

MethodRun run_method(const Graph& g, const SeedDistribution& s, const SolverParams& params,
                     Method method, std::ostream* trace) {
  MethodRun run;
  run.method = method;
  const auto start = std::chrono::steady_clock::now();
  NodeSet touched;
  if (method == Method::ista) {
    IstaOptions opts;
    opts.trace = trace;
    IstaResult res;
    try {
      res = ista_solve(g, s, params, opts);
    } catch (const IstaBudgetExhausted& e) {
      res = e.partial();
      run.budget_exhausted = true;
    }
    run.p = std::move(res.p);
    run.iterations = res.iterations;
    touched = std::move(res.touched_nodes);
  } else {
    const ApprVariant variant = method == Method::appr_fifo     ? ApprVariant::fifo
                                : method == Method::appr_greedy ? ApprVariant::greedy
                                                                : ApprVariant::heuristic_queue;
    ApprResult res;
    try {
      res = appr_solve(g, s, params, variant);
    } catch (const ApprBudgetExhausted& e) {
      res = e.partial();
      run.budget_exhausted = true;
    }
    run.p = std::move(res.p);
    run.iterations = res.push_count;
    touched = std::move(res.touched_nodes);
  }
  run.touched = touched.size();
  run.touched_volume = touched.volume();
  run.nnz = run.p.nnz();
  if (run.nnz > 0) run.profile = sweep_cut(g, run.p);
  run.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return run;
}

json single_report_json(const Graph& g, const RunConfig& cfg, const MethodRun& run) {
  json r;
  r["config"] = config_json(cfg);
  r["stats"] = stats_json(cfg, run);
  r["best_cut"] = best_cut_json(g, run);
  json rows = json::array();
  if (run.profile) {
    const auto& prof = *run.profile;
    for (std::size_t k = 0; k < prof.prefix_conductance.size(); ++k) {
      rows.push_back({{"rank", k},
                      {"node_id_original", g.original_id(prof.order[k])},
                      {"p_over_d", prof.p_over_d[k]},
                      {"prefix_volume", prof.prefix_volume[k]},
                      {"prefix_conductance", prof.prefix_conductance[k]}});
    }
  }
  r["profile"] = std::move(rows);
  return r;
}

void single_report_csv(const Graph& g, const RunConfig& cfg, const MethodRun& run,
                       std::ostream& out) {
  out << "# config.graph=" << cfg.graph_path << '\n';
  out << "# config.seed=" << run.seed << '\n';
  out << "# config.method=" << to_string(run.method) << '\n';
  out << "# config.alpha=" << fmt17(cfg.params.alpha) << '\n';
  out << "# config.rho=" << fmt17(cfg.params.rho) << '\n';
  out << "# config.epsilon=" << fmt17(cfg.params.epsilon) << '\n';
  out << "# config.max_iters=" << cfg.params.max_iters << '\n';
  out << "# stats.iterations=" << run.iterations << '\n';
  out << "# stats.touched=" << run.touched << '\n';
  out << "# stats.touched_volume=" << run.touched_volume << '\n';
  out << "# stats.nnz=" << run.nnz << '\n';
  out << "# stats.wall_ms=" << timing_text(cfg, run) << '\n';
  out << "# stats.budget_exhausted=" << (run.budget_exhausted ? "true" : "false") << '\n';
  out << "# best_cut.nodes=";
  const auto nodes = best_nodes(g, run);
  for (std::size_t k = 0; k < nodes.size(); ++k) out << (k ? " " : "") << nodes[k];
  out << '\n';
  out << "# best_cut.conductance=" << (run.profile ? fmt17(run.profile->best_conductance) : "")
      << '\n';
  out << "# best_cut.volume="
      << (run.profile ? std::to_string(run.profile->best_set.volume()) : "") << '\n';
  if (run.profile) {
    write_profile_csv(g, *run.profile, out);
  } else {
    out << "rank,node_id_original,p_over_d,prefix_volume,prefix_conductance\n";
  }
}

json comparison_json(const Graph& g, const RunConfig& cfg, const std::vector<MethodRun>& runs) {
  json r;
  r["config"] = config_json(cfg);
  json rows = json::array();
  const MethodRun* best = nullptr;
  for (const auto& run : runs) {
    rows.push_back({{"seed", run.seed},
                    {"method", to_string(run.method)},
                    {"stats", stats_json(cfg, run)},
                    {"best_cut", best_cut_json(g, run)}});
    if (run.profile && (!best || run.profile->best_conductance < best->profile->best_conductance)) {
      best = &run;
    }
  }
  r["runs"] = std::move(rows);
  if (best) {
    r["best"] = {{"seed", best->seed},
                 {"method", to_string(best->method)},
                 {"conductance", best->profile->best_conductance}};
  } else {
    r["best"] = nullptr;
  }
  return r;
}

void comparison_csv(const Graph& g, const RunConfig& cfg, const std::vector<MethodRun>& runs,
                    std::ostream& out) {
  (void)g;
  out << "seed,method,nnz,best_conductance,best_volume,iterations,touched,wall_ms,"
         "budget_exhausted\n";
  for (const auto& run : runs) {
    out << run.seed << ',' << to_string(run.method) << ',' << run.nnz << ','
        << (run.profile ? fmt17(run.profile->best_conductance) : "") << ','
        << (run.profile ? std::to_string(run.profile->best_set.volume()) : "") << ','
        << run.iterations << ',' << run.touched << ',' << timing_text(cfg, run) << ','
        << (run.budget_exhausted ? "true" : "false") << '\n';
  }
}

std::vector<std::string> read_seed_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open seed list '" + path + "'");
  std::vector<std::string> seeds;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    seeds.push_back(line.substr(b, e - b + 1));
  }
  return seeds;
}

int cmd_cluster(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.params.validate();
    const std::vector<Method> methods = parse_methods(cfg.method);
    if (cfg.seeds.empty()) throw SeedError("no seed given");
    const Graph g = load_graph_file(cfg.graph_path);

    std::vector<SeedDistribution> seeds;
    seeds.reserve(cfg.seeds.size());
    for (const auto& spec : cfg.seeds) seeds.push_back(bind_seed(g, spec));

    struct Job {
      std::size_t seed;
      Method method;
    };
    std::vector<Job> jobs;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      for (Method m : methods) jobs.push_back({k, m});
    }
    const bool single = jobs.size() == 1;

    std::ofstream trace_file;
    std::ostream* trace = nullptr;
    if (!cfg.trace_path.empty()) {
      if (!single || methods.front() != Method::ista) {
        throw InvalidInputError("--trace needs a single seed with method ista");
      }
      trace_file.open(cfg.trace_path);
      if (!trace_file) throw std::runtime_error("cannot write '" + cfg.trace_path + "'");
      trace = &trace_file;
    }

    // Independent solves over the shared immutable graph; results keep input order.
    std::vector<MethodRun> runs(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t k = next++; k < jobs.size(); k = next++) {
        runs[k] = run_method(g, seeds[jobs[k].seed], cfg.params, jobs[k].method, trace);
        runs[k].seed = cfg.seeds[jobs[k].seed];
      }
    };
    const unsigned nthreads =
        std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(jobs.size())));
    if (nthreads == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    }

    std::ostringstream text;
    if (single) {
      if (cfg.format == OutputFormat::json) {
        text << single_report_json(g, cfg, runs.front()).dump(2) << '\n';
      } else {
        single_report_csv(g, cfg, runs.front(), text);
      }
    } else if (cfg.format == OutputFormat::json) {
      text << comparison_json(g, cfg, runs).dump(2) << '\n';
    } else {
      comparison_csv(g, cfg, runs, text);
    }
    emit(text.str(), cfg.output_path, out);

    const bool exhausted =
        std::any_of(runs.begin(), runs.end(), [](const auto& r) { return r.budget_exhausted; });
    if (exhausted) {
      err << "warning: iteration budget exhausted; report holds partial results\n";
      return kBudgetExhausted;
    }
    return kOk;
  } catch (...) {
    return report_error(err);
  }
}

SparseVector read_vector_file(const Graph& g, std::istream& in) {
  SparseVector p;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    std::istringstream row(line);
    OriginalId node = 0;
    double value = 0.0;
    std::string extra;
    if (!(row >> node >> value) || (row >> extra)) {
      throw ParseError(line_no, "expected 'node value'");
    }
    const auto id = g.find_node(node);
    if (!id) throw DomainError("node " + std::to_string(node) + " does not occur in the graph");
    if (p.has(*id)) throw ParseError(line_no, "node " + std::to_string(node) + " listed twice");
    p.set(*id, value);
  }
  return p;
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const Graph g = load_graph_file(args.graph_path);
    std::ifstream in(args.p_path);
    if (!in) throw std::runtime_error("cannot open vector file '" + args.p_path + "'");
    const SparseVector p = read_vector_file(g, in);
    const SweepProfile prof = sweep_cut(g, p);
    std::ostringstream text;
    write_profile_csv(g, prof, text);
    emit(text.str(), args.output_path, out);
    return kOk;
  } catch (...) {
    return report_error(err);
  }
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig& cfg = args.run;
    cfg.params.validate();
    if (cfg.seeds.empty()) throw SeedError("no seed given");
    const Graph g = load_graph_file(cfg.graph_path);
    oracle::require_small(g, args.node_cap);

    json report = json::array();
    bool all_pass = true;
    std::ostringstream text;
    for (const auto& spec : cfg.seeds) {
      const SeedDistribution s = bind_seed(g, spec);
      const oracle::DenseL1Result ref = oracle::dense_l1_ppr(g, s, cfg.params, std::nullopt,
                                                             args.node_cap);

      // Step the solver by hand to watch the active sets.
      IstaSolver solver(g, s, cfg.params);
      bool nesting_ok = true;
      std::vector<NodeId> prev;
      auto check_active = [&] {
        std::vector<NodeId> now = solver.state().active;
        std::sort(now.begin(), now.end());
        if (!std::includes(now.begin(), now.end(), prev.begin(), prev.end())) nesting_ok = false;
        for (NodeId i : now) {
          if (!(ref.q(i) > 0.0)) nesting_ok = false;
        }
        prev = std::move(now);
      };
      check_active();
      bool exhausted = false;
      while (!solver.converged()) {
        if (solver.state().iteration >= cfg.params.max_iters) {
          exhausted = true;
          break;
        }
        solver.step();
        check_active();
      }
      IstaResult res = solver.result();

      if (args.fault_inject) {
        const NodeId victim = res.q.touched_count() ? res.q.touched().front() : s.entries().front().first;
        res.q.add(victim, 0.1);
        res.p = p_from_q(g, res.q);
        res.support = NodeSet(g, res.q.support());
      }

      double max_sqrt_d = 0.0;
      for (NodeId i = 0; i < g.node_count(); ++i) max_sqrt_d = std::max(max_sqrt_d, g.sqrt_degree(i));
      const double ra = cfg.params.rho * cfg.params.alpha;
      const double kkt_tol = cfg.params.epsilon * ra * max_sqrt_d + 1e-10;
      const oracle::KktReport kkt =
          oracle::check_optimality(g, s, cfg.params, res.q, kkt_tol, args.node_cap);

      double gap = 0.0;
      for (NodeId i = 0; i < g.node_count(); ++i) {
        gap = std::max(gap, std::abs(res.p.get(i) - g.sqrt_degree(i) * ref.q(i)));
      }
      const double vol = static_cast<double>(res.support.volume());
      const double vol_bound = s.norm1() / cfg.params.rho;

      const bool kkt_ok = kkt.max_violation <= kkt_tol;
      const bool gap_ok = gap <= args.gap_tolerance;
      const bool vol_ok = vol <= vol_bound;
      const bool ok = kkt_ok && gap_ok && vol_ok && nesting_ok && !exhausted;
      all_pass = all_pass && ok;

      report.push_back({{"seed", spec},
                        {"iterations", res.iterations},
                        {"kkt_max_violation", kkt.max_violation},
                        {"kkt_tolerance", kkt_tol},
                        {"kkt_pass", kkt_ok},
                        {"oracle_gap", gap},
                        {"gap_tolerance", args.gap_tolerance},
                        {"gap_pass", gap_ok},
                        {"support_volume", res.support.volume()},
                        {"volume_bound", vol_bound},
                        {"volume_pass", vol_ok},
                        {"nesting_pass", nesting_ok},
                        {"budget_exhausted", exhausted},
                        {"pass", ok}});

      auto verdict = [](bool b) { return b ? "PASS" : "FAIL"; };
      text << "seed " << spec << " (" << res.iterations << " iterations)\n";
      text << "  kkt violation     " << fmt17(kkt.max_violation) << " <= " << fmt17(kkt_tol)
           << "  " << verdict(kkt_ok) << '\n';
      text << "  oracle gap        " << fmt17(gap) << " <= " << fmt17(args.gap_tolerance) << "  "
           << verdict(gap_ok) << '\n';
      text << "  support volume    " << res.support.volume() << " <= " << fmt17(vol_bound) << "  "
           << verdict(vol_ok) << '\n';
      text << "  active-set nesting" << "  " << verdict(nesting_ok) << '\n';
      if (exhausted) text << "  iteration budget exhausted\n";
    }

    if (cfg.format == OutputFormat::json) {
      emit(json{{"seeds", report}, {"all_pass", all_pass}}.dump(2) + "\n", cfg.output_path, out);
    } else {
      text << (all_pass ? "all checks passed\n" : "some checks FAILED\n");
      emit(text.str(), cfg.output_path, out);
    }
    return all_pass ? kOk : kCheckFailed;
  } catch (...) {
    return report_error(err);
  }
}

int cmd_stats(const StatsArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const Graph g = load_graph_file(args.graph_path);
    std::map<std::uint32_t, std::uint64_t> hist;
    for (std::uint32_t d : g.degrees()) ++hist[d];
    if (args.format == OutputFormat::json) {
      json h = json::array();
      for (const auto& [d, c] : hist) h.push_back({{"degree", d}, {"count", c}});
      out << json{{"nodes", g.node_count()}, {"edges", g.edge_count()}, {"degree_histogram", h}}
                 .dump(2)
          << '\n';
    } else {
      out << "# nodes=" << g.node_count() << '\n' << "# edges=" << g.edge_count() << '\n';
      out << "degree,count\n";
      for (const auto& [d, c] : hist) out << d << ',' << c << '\n';
    }
    return kOk;
  } catch (...) {
    return report_error(err);
  }
}

}  // namespace l1pr::cli
