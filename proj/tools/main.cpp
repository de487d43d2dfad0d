// l1pr: seeded local clustering from the command line.

#include <cstdlib>
#include <iostream>
#include <map>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/cfg/env.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"

namespace {

using l1pr::cli::OutputFormat;

const std::map<std::string, OutputFormat> kFormats{{"json", OutputFormat::json},
                                                   {"csv", OutputFormat::csv}};

void add_solver_options(CLI::App& cmd, l1pr::cli::RunConfig& cfg) {
  cmd.add_option("--graph", cfg.graph_path, "SNAP-style edge list")->required()->check(CLI::ExistingFile);
  cmd.add_option("--seed", cfg.seeds, "seed node id, or node:weight,node:weight (repeatable)");
  cmd.add_option("--alpha", cfg.params.alpha, "teleportation parameter in (0,1)")->capture_default_str();
  cmd.add_option("--rho", cfg.params.rho, "l1 regularization / APPR threshold")->capture_default_str();
  cmd.add_option("--epsilon", cfg.params.epsilon, "ISTA termination slack in [0,1)")->capture_default_str();
  cmd.add_option("--max-iters", cfg.params.max_iters, "iteration (push) budget")->capture_default_str();
  cmd.add_option("--format", cfg.format, "output format")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  cmd.add_option("--output,-o", cfg.output_path, "write the report here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  // Log level via SPDLOG_LEVEL (e.g. SPDLOG_LEVEL=debug); logs go to stderr.
  spdlog::set_default_logger(spdlog::stderr_color_mt("l1pr"));
  spdlog::set_level(spdlog::level::warn);
  spdlog::cfg::load_env_levels();

  CLI::App app{"Local graph clustering with l1-regularized PageRank and APPR"};
  app.require_subcommand(1);

  l1pr::cli::RunConfig cluster;
  std::string seed_list;
  auto* cmd_cluster = app.add_subcommand("cluster", "solve from a seed and sweep for the best cut");
  add_solver_options(*cmd_cluster, cluster);
  cmd_cluster->add_option("--method", cluster.method,
                          "ista | appr-fifo | appr-greedy | appr-heuristic | all")
      ->capture_default_str();
  cmd_cluster->add_option("--seed-list", seed_list, "file with one seed spec per line (seed search)")
      ->check(CLI::ExistingFile);
  cmd_cluster->add_option("--trace", cluster.trace_path, "ISTA per-iteration CSV trace");
  cmd_cluster->add_flag("!--no-timing", cluster.timing, "report wall_ms as null for reproducible output");
  cluster.threads = std::max(1u, std::thread::hardware_concurrency());
  cmd_cluster->add_option("--threads", cluster.threads, "worker threads for seed search")
      ->capture_default_str();

  l1pr::cli::SweepArgs sweep;
  auto* cmd_sweep = app.add_subcommand("sweep", "sweep-cut profile of a given vector");
  cmd_sweep->add_option("--graph", sweep.graph_path, "edge list")->required()->check(CLI::ExistingFile);
  cmd_sweep->add_option("--p-file", sweep.p_path, "rows 'node value'")->required()->check(CLI::ExistingFile);
  cmd_sweep->add_option("--output,-o", sweep.output_path, "write CSV here instead of stdout");

  l1pr::cli::VerifyArgs verify;
  verify.run.params.epsilon = 1e-8;
  verify.run.format = OutputFormat::csv;
  std::string verify_seed_list;
  auto* cmd_verify = app.add_subcommand("verify", "check ISTA output against the dense oracle");
  add_solver_options(*cmd_verify, verify.run);
  cmd_verify->add_option("--seed-list", verify_seed_list, "file with one seed spec per line")
      ->check(CLI::ExistingFile);
  cmd_verify->add_option("--gap-tol", verify.gap_tolerance, "max l_inf gap to the oracle")
      ->capture_default_str();
  cmd_verify->add_option("--node-cap", verify.node_cap, "largest graph the oracle accepts")
      ->capture_default_str();
  cmd_verify->add_flag("--fault-inject", verify.fault_inject, "perturb the solution (negative control)");

  l1pr::cli::StatsArgs stats;
  auto* cmd_stats = app.add_subcommand("stats", "node/edge counts and degree histogram");
  cmd_stats->add_option("--graph", stats.graph_path, "edge list")->required()->check(CLI::ExistingFile);
  cmd_stats->add_option("--format", stats.format, "output format")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : l1pr::cli::kUsage;
  }

  try {
    if (*cmd_cluster) {
      if (!seed_list.empty()) {
        for (auto& s : l1pr::cli::read_seed_list(seed_list)) cluster.seeds.push_back(std::move(s));
      }
      return l1pr::cli::cmd_cluster(cluster, std::cout, std::cerr);
    }
    if (*cmd_sweep) return l1pr::cli::cmd_sweep(sweep, std::cout, std::cerr);
    if (*cmd_verify) {
      if (!verify_seed_list.empty()) {
        for (auto& s : l1pr::cli::read_seed_list(verify_seed_list)) verify.run.seeds.push_back(std::move(s));
      }
      return l1pr::cli::cmd_verify(verify, std::cout, std::cerr);
    }
    if (*cmd_stats) return l1pr::cli::cmd_stats(stats, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return l1pr::cli::kIoError;
  }
  return l1pr::cli::kUsage;
}
