#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "l1pr/graph.hpp"
#include "l1pr/model.hpp"
#include "l1pr/sparse_vector.hpp"
#include "l1pr/sweep.hpp"

namespace l1pr::cli {

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,        // unreadable or malformed input files
  kUsage = 2,          // bad command line (CLI11 parse failures)
  kInvalidSeed = 3,
  kBudgetExhausted = 4,
  kCheckFailed = 5,    // verify found a violated property
  kOracleRefused = 6,  // graph above the dense oracle cap
  kInvalidInput = 7,   // parameter out of range, empty vector, ...
};

enum class Method { ista, appr_fifo, appr_greedy, appr_heuristic };
enum class OutputFormat { json, csv };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);
/// "all" expands to every method in declaration order.
std::vector<Method> parse_methods(std::string_view name);

struct RunConfig {
  std::string graph_path;
  std::vector<std::string> seeds;  ///< one seed spec per run, in output order
  SolverParams params;
  std::string method = "ista";  ///< a method name or "all"
  OutputFormat format = OutputFormat::json;
  std::string output_path;  ///< empty = the `out` stream
  std::string trace_path;   ///< ISTA iteration trace CSV (single run only)
  bool timing = true;
  unsigned threads = 1;
};

/// One solver run followed by the sweep.
struct MethodRun {
  Method method = Method::ista;
  std::string seed;
  SparseVector p;
  std::uint64_t iterations = 0;
  std::uint64_t touched = 0;
  std::uint64_t touched_volume = 0;
  std::size_t nnz = 0;
  double wall_ms = 0.0;
  bool budget_exhausted = false;
  std::optional<SweepProfile> profile;  ///< absent when p = 0
};

MethodRun run_method(const Graph& g, const SeedDistribution& s, const SolverParams& params,
                     Method method, std::ostream* trace = nullptr);

nlohmann::json single_report_json(const Graph& g, const RunConfig& cfg, const MethodRun& run);
void single_report_csv(const Graph& g, const RunConfig& cfg, const MethodRun& run,
                       std::ostream& out);
nlohmann::json comparison_json(const Graph& g, const RunConfig& cfg,
                               const std::vector<MethodRun>& runs);
void comparison_csv(const Graph& g, const RunConfig& cfg, const std::vector<MethodRun>& runs,
                    std::ostream& out);

/// Reads "node value" rows (original ids) into a vector bound to g.
SparseVector read_vector_file(const Graph& g, std::istream& in);

int cmd_cluster(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct SweepArgs {
  std::string graph_path;
  std::string p_path;
  std::string output_path;
};
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);

struct VerifyArgs {
  RunConfig run;             ///< graph, seeds and solver parameters
  double gap_tolerance = 1e-6;
  bool fault_inject = false; ///< perturb the solver output before checking
  std::size_t node_cap = 2048;
};
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);

struct StatsArgs {
  std::string graph_path;
  OutputFormat format = OutputFormat::json;
};
int cmd_stats(const StatsArgs& args, std::ostream& out, std::ostream& err);

/// Reads a seed-list file: one seed spec per line, '#' comments allowed.
std::vector<std::string> read_seed_list(const std::string& path);

}  // namespace l1pr::cli
