#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "sbg/games.hpp"
#include "sbg/gp.hpp"

namespace sbg {

struct QueryRecord {
  long t = 0;  // 1-based round number
  int x_index = 0;
  int y_index = 0;
  double value = 0.0;
};

struct SolverResult {
  int x_index = 0;
  int y_index = 0;
  long rounds_used = 0;
  bool terminated = false;  // stopping rule met before the round cap
  std::vector<QueryRecord> query_log;
  double wall_seconds = 0.0;
};

// Exploration term b_t as a function of the (even) round counter.
using BtSchedule = std::function<double(long)>;

// b_t = 2 log(n m pi^2 t^2 / (6 delta)) -- the fixed-confidence default.
BtSchedule theorem_bt(int n, int m, double delta);

// b_t = 2 log(n m pi^2 t^2 / (3 delta)) -- the discretized-infinite variant.
BtSchedule corollary_bt(int n, int m, double delta);

struct LucbOptions {
  double epsilon = 0.0;
  double delta = 0.1;
  long round_cap = 30000;  // odd caps are rounded up to even
  BtSchedule exploration;  // defaults to theorem_bt(n, m, delta)
  bool keep_query_log = true;
};

// Fixed-confidence solver with a GP belief: selects the mean-maximin
// candidate and the strongest challenger each even round, stops when the
// candidate's lower bound clears every challenger's upper bound minus
// epsilon.
SolverResult m_gp_lucb(Simulator& sim, const ProfileGrid& grid,
                       const KernelSpec& spec, double lambda,
                       const LucbOptions& options);

// Same control flow with an independent (diagonal) Gaussian belief per
// profile: mean S / (N + lambda / sigma^2), variance lambda / (lambda /
// sigma^2 + N).
SolverResult m_g_lucb(Simulator& sim, const ProfileGrid& grid, double lambda,
                      double prior_variance, const LucbOptions& options);

// Sample-mean baseline with range-scaled Hoeffding intervals:
// halfwidth = utility_range * sqrt(b_t / (2 N)).
SolverResult m_lucb(Simulator& sim, const ProfileGrid& grid,
                    double utility_range, const LucbOptions& options);

// 1/2 + sum_{i=2..p} 1/i.
double log_bar(long p);

// Successive-elimination phase schedule: t_p[0] = 0 and
// t_p[p] = ceil((budget - profiles) / (log_bar(profiles) * (profiles + 1 - p))).
struct PhaseSchedule {
  long budget = 0;
  long profiles = 0;
  double logbar = 0.0;
  std::vector<long> t_p;  // indices 0 .. profiles - 1

  // Queries consumed if one profile is eliminated per phase.
  long total_queries() const;
};

PhaseSchedule phase_lengths(long budget, long profiles);

struct GpSeOptions {
  // Replace the GP posterior mean with the per-profile diagonal posterior
  // mean (test-only; mirrors the independent-arm analysis).
  bool independent_means = false;
  bool keep_query_log = true;
};

// Fixed-budget successive elimination: profiles - 1 phases, each surviving
// profile queried t_p[p] - t_p[p-1] times per phase, then the row of the
// posterior-mean minimizer loses its best surviving cell.  Never exceeds
// the budget.
SolverResult gp_se(Simulator& sim, const ProfileGrid& grid,
                   const KernelSpec& spec, double lambda, long budget,
                   const GpSeOptions& options = {});

// CSV export, columns t,x_index,y_index,u_tilde ordered by t.
void write_query_log_csv(const SolverResult& result, std::ostream& out);

}  // namespace sbg
