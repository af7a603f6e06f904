#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sbg/solvers.hpp"
#include "sbg/spitfire.hpp"

namespace sbg {

// Batch-experiment description, loadable from a key = value config file
// (see README for the schema).
struct ExperimentConfig {
  // Game source.
  std::string source = "random_gp";  // random_gp | spitfire | file
  std::string kernel = "se";         // se | matern
  double length_scale = 0.1;
  double nu = 2.5;
  double prior_variance = 1.0;
  int n = 3;
  int m = 3;
  int instances = 1;
  std::string game_file;
  SpitfireParams spitfire;

  // Algorithm.
  std::string algorithm = "m_gp_lucb";  // m_gp_lucb | gp_se | m_g_lucb | m_lucb
  double delta = 0.1;
  double epsilon = 0.0;
  double lambda = 0.1;
  long round_cap = 30000;  // also the GP-SE budget T
  std::string bt = "theorem";  // theorem | corollary

  // Execution.
  int runs = 100;
  std::uint64_t base_seed = 0;
  int threads = 1;
  std::string out;

  // Discretization sweep (eps_table / spitfire CLI).
  std::vector<int> k_list;
  int ref_points = 100;
  double smooth_a = 1.0;
  double smooth_b = 1.0;

  void validate() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

struct RunRecord {
  int instance = 0;
  int run = 0;
  std::string algorithm;
  long rounds_used = 0;
  bool terminated = false;
  int x_index = 0;
  int y_index = 0;
  std::optional<bool> correct;     // vs brute-force maximin of the true table
  std::optional<double> eps_hat;   // only for discretized sweeps
  double wall_seconds = 0.0;       // never serialized (reproducibility)
  bool failed = false;
  std::string error;
};

struct ExperimentSummary {
  double t_delta_mean = 0.0;  // mean rounds over terminated runs; NaN if none
  double pct_end = 0.0;
  double pct_opt = 0.0;
  double eps_hat_mean = 0.0;
  long n_runs = 0;
  long n_failed = 0;
};

struct ExperimentOutput {
  std::vector<RunRecord> records;
  ExperimentSummary summary;
};

// Random-GP instance with degenerate-draw rejection (redraw on a tie between
// the best and second-best maximin row values; attempts logged to stderr).
FiniteGame sample_game_instance(const ExperimentConfig& config, int instance_id,
                                int* redraws = nullptr);

// Ground-truth table for the configured source (spitfire uses the analytic
// expected-damage oracle).
FiniteGame true_game(const ExperimentConfig& config, int instance_id);

// Runs instances x runs independent solves with derived seeds; per-run
// failures are recorded, not fatal.
ExperimentOutput run_experiment(const ExperimentConfig& config);

// Discretization sweep over k_list against a fine reference grid.
struct EpsRunRecord {
  int instance = 0;
  int k_eps = 0;
  int run = 0;
  double eps_theoretical = 0.0;
  double eps_hat = 0.0;
  long rounds_used = 0;
  bool terminated = false;
  bool correct = false;  // vs the coarse grid's own maximin
  bool failed = false;
};

struct EpsTableRow {
  int k_eps = 0;
  double eps_theoretical = 0.0;
  double eps_hat_mean = 0.0;
};

struct EpsSweepOutput {
  std::vector<EpsRunRecord> records;
  std::vector<EpsTableRow> table;
};

EpsSweepOutput eps_sweep(const ExperimentConfig& config);
std::vector<EpsTableRow> eps_table(const ExperimentConfig& config);

// --- persistence -------------------------------------------------------------

ExperimentSummary summarize(const std::vector<RunRecord>& records);

void write_records_csv(const std::vector<RunRecord>& records, std::ostream& out);
std::vector<RunRecord> read_records_csv(std::istream& in);

std::string summary_to_json(const ExperimentSummary& summary);

// Plot-data CSV, columns k_eps,eps,eps_hat.
void write_eps_csv(const std::vector<EpsTableRow>& rows, std::ostream& out);

// Per-run sweep CSV, columns run,k_eps,eps_theoretical,eps_hat,rounds,terminated.
void write_eps_run_csv(const std::vector<EpsRunRecord>& records,
                       std::ostream& out);

// Writes <prefix>.records.csv and <prefix>.summary.json, creating parent
// directories as needed.
void emit(const ExperimentOutput& output, const std::string& prefix);

}  // namespace sbg
