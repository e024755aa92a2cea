#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gpm/dynamics.hpp"
#include "gpm/io.hpp"

namespace gpm::cli {

inline constexpr const char* kVersion = "1.0.0";

// One experiment. steps/thin may instead be given in sweeps; resolve()
// converts them so a manifest always records exact step counts.
struct ExperimentConfig {
  int side_length = 63;
  int q = 0;  // 0: taken from the matrix or rho
  double beta = 1.0;
  json matrix = "potts";  // builtin name or {"q", "entries"}
  std::vector<double> rho;  // proportions, normalized on use
  std::string mode = "kawasaki";
  std::optional<std::uint64_t> steps;
  std::optional<double> sweeps;
  std::optional<std::uint64_t> thin;
  std::optional<double> thin_sweeps;
  std::uint64_t seed = 0;
  int replicas = 1;
  std::vector<double> h;
  std::string init = "canonical";  // canonical, random or file
  std::string init_file;
  std::string output = "gpm_out";

  // Accepts a bare config object or a manifest holding one under "config".
  static ExperimentConfig from_json(const json& j);
  // Every field except output, with steps and thin in steps.
  json to_json() const;
};

// Validated, fully determined run settings.
struct ResolvedRun {
  ExperimentConfig config;  // steps and thin filled, sweeps cleared
  ChainParams params;       // seed unset; set per replica
};

// Cross-validates the config; throws std::invalid_argument naming the rule.
ResolvedRun resolve(const ExperimentConfig& config);

ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

// Replica r runs with chain seed replica_seed(seed, r); a random initial
// state draws from replica_seed(chain seed, 1).
std::uint64_t chain_seed(std::uint64_t seed, int replica);
std::uint64_t init_seed(std::uint64_t seed, int replica);

// flag, else GPM_THREADS, else hardware concurrency (at least 1).
std::size_t worker_count(std::optional<int> flag);

// Writes <output>/manifest.json and per replica <output>/replica_NNN/
// {metrics.csv, snapshots/step_<step>.txt, final.txt}.
int cmd_run(const ExperimentConfig& config, std::size_t threads, std::ostream& out, std::ostream& err);

struct AnalyzeOptions {
  std::vector<std::string> inputs;  // snapshot files or directories
  double alpha = 3.0;
  double delta = 0.15;
  std::string baseline = "anneal";
  json matrix = "potts";
  std::vector<double> rho;  // empty: each snapshot's own magnetization
  std::string output = "gpm_analysis";
  std::string theta_csv;
  std::size_t min_component = 9;
  std::uint64_t anneal_seed = 0;
  bool dump_bridges = false;
};

// Per-snapshot <output>/NNNN_<name>.report.json, reports.csv and
// aggregate.csv. Unreadable snapshots are skipped with a warning; returns
// nonzero when none could be analyzed.
int cmd_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err);

struct RenderOptions {
  std::string input;
  std::string output;
  std::string palette;  // JSON file; empty for the default hues
  int cell = 4;
};

int cmd_render(const RenderOptions& options, std::ostream& out, std::ostream& err);

struct OracleOptions {
  int side_length = 3;
  int q = 2;
  json matrix = "potts";
  double beta = 0.7;
  std::vector<std::int64_t> counts;  // fixed magnetization
  std::vector<double> field;         // field weights
  std::string output = "gibbs_table.csv";
  std::string report;                // optional JSON report path
  std::uint64_t steps = 0;           // > 0: run the matching chain and report TV
  std::uint64_t seed = 0;
};

int cmd_oracle(const OracleOptions& options, std::ostream& out, std::ostream& err);

// "list" prints builtin names; "dump" prints one matrix as JSON.
int cmd_matrices(const std::string& action, const std::string& name, int q, std::ostream& out, std::ostream& err);

CostMatrix matrix_from_json(const json& spec, int q);

// Parses argv and dispatches; returns the process exit code.
int run(int argc, char** argv);

}  // namespace gpm::cli
