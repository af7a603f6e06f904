#include "sbg/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "sbg/detail/lucb_beliefs.hpp"

namespace sbg {

BtSchedule theorem_bt(int n, int m, double delta) {
  const double nm = static_cast<double>(n) * m;
  return [nm, delta](long t) {
    const double td = static_cast<double>(t);
    return 2.0 * std::log(nm * std::numbers::pi * std::numbers::pi * td * td /
                          (6.0 * delta));
  };
}

BtSchedule corollary_bt(int n, int m, double delta) {
  const double nm = static_cast<double>(n) * m;
  return [nm, delta](long t) {
    const double td = static_cast<double>(t);
    return 2.0 * std::log(nm * std::numbers::pi * std::numbers::pi * td * td /
                          (3.0 * delta));
  };
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SolverResult run_lucb(Simulator& sim, const ProfileGrid& grid,
                      detail::LucbBelief& belief, const LucbOptions& options) {
  const int n = grid.n();
  const int m = grid.m();
  if (n < 2 || m < 2) {
    throw parameter_error("LUCB needs at least two strategies per player");
  }
  if (!(options.delta > 0.0) || !(options.delta < 1.0)) {
    throw parameter_error("delta must lie in (0, 1)");
  }
  if (options.epsilon < 0.0) throw parameter_error("epsilon must be >= 0");
  if (options.round_cap < 0) throw parameter_error("round cap must be >= 0");
  const long cap = options.round_cap + (options.round_cap % 2);
  const BtSchedule bt =
      options.exploration ? options.exploration : theorem_bt(n, m, options.delta);

  const auto start = std::chrono::steady_clock::now();
  SolverResult result;
  std::vector<int> gamma(static_cast<std::size_t>(n), 0);
  long t = 0;

  while (true) {
    const double b = bt(std::max<long>(t, 1));

    // gamma(x): best response by lower confidence bound; xbar: maximin of
    // the posterior means.  Lowest index wins ties.
    int xbar = 0;
    double xbar_value = -kInf;
    for (int i = 0; i < n; ++i) {
      int arg_l = 0;
      double min_l = kInf;
      double min_mean = kInf;
      for (int j = 0; j < m; ++j) {
        const int f = grid.flat(i, j);
        const double mu = belief.mean(f);
        const double l = mu - belief.halfwidth(f, b);
        if (l < min_l) {
          min_l = l;
          arg_l = j;
        }
        if (mu < min_mean) min_mean = mu;
      }
      gamma[static_cast<std::size_t>(i)] = arg_l;
      if (min_mean > xbar_value) {
        xbar_value = min_mean;
        xbar = i;
      }
    }

    // Candidate and strongest challenger among the other rows' candidates.
    const int cand = grid.flat(xbar, gamma[static_cast<std::size_t>(xbar)]);
    int challenger = -1;
    double challenger_u = -kInf;
    for (int i = 0; i < n; ++i) {
      if (i == xbar) continue;
      const int f = grid.flat(i, gamma[static_cast<std::size_t>(i)]);
      const double u = belief.mean(f) + belief.halfwidth(f, b);
      if (u > challenger_u) {
        challenger_u = u;
        challenger = f;
      }
    }

    const double cand_l = belief.mean(cand) - belief.halfwidth(cand, b);
    if (t >= 2 && cand_l > challenger_u - options.epsilon) {
      result.terminated = true;
      result.x_index = xbar;
      result.y_index = gamma[static_cast<std::size_t>(xbar)];
      break;
    }
    if (t + 2 > cap) {
      result.terminated = false;
      result.x_index = xbar;
      result.y_index = gamma[static_cast<std::size_t>(xbar)];
      break;
    }

    for (const int f : {cand, challenger}) {
      const auto [i, j] = grid.unflat(f);
      const double value = sim.query(grid.profile_flat(f));
      ++t;
      if (options.keep_query_log) {
        result.query_log.push_back(QueryRecord{t, i, j, value});
      }
      belief.observe(f, value);
    }
  }

  result.rounds_used = t;
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace

SolverResult m_gp_lucb(Simulator& sim, const ProfileGrid& grid,
                       const KernelSpec& spec, double lambda,
                       const LucbOptions& options) {
  detail::GpBelief belief(grid, spec, lambda);
  return run_lucb(sim, grid, belief, options);
}

SolverResult m_g_lucb(Simulator& sim, const ProfileGrid& grid, double lambda,
                      double prior_variance, const LucbOptions& options) {
  detail::DiagonalGaussianBelief belief(grid.size(), lambda, prior_variance);
  return run_lucb(sim, grid, belief, options);
}

SolverResult m_lucb(Simulator& sim, const ProfileGrid& grid,
                    double utility_range, const LucbOptions& options) {
  detail::SampleMeanBelief belief(grid.size(), utility_range);
  return run_lucb(sim, grid, belief, options);
}

double log_bar(long p) {
  if (p < 1) throw parameter_error("log_bar needs p >= 1");
  double sum = 0.5;
  for (long i = 2; i <= p; ++i) sum += 1.0 / static_cast<double>(i);
  return sum;
}

long PhaseSchedule::total_queries() const {
  long total = 0;
  long prev = 0;
  for (std::size_t p = 1; p < t_p.size(); ++p) {
    const long alive = profiles - static_cast<long>(p) + 1;
    total += alive * (t_p[p] - prev);
    prev = t_p[p];
  }
  return total;
}

PhaseSchedule phase_lengths(long budget, long profiles) {
  if (profiles < 2) throw parameter_error("need at least two profiles");
  if (budget <= profiles) {
    throw parameter_error("budget must exceed the number of profiles");
  }
  PhaseSchedule schedule;
  schedule.budget = budget;
  schedule.profiles = profiles;
  schedule.logbar = log_bar(profiles);
  schedule.t_p.assign(static_cast<std::size_t>(profiles), 0);
  for (long p = 1; p <= profiles - 1; ++p) {
    schedule.t_p[static_cast<std::size_t>(p)] = static_cast<long>(
        std::ceil(static_cast<double>(budget - profiles) /
                  (schedule.logbar * static_cast<double>(profiles + 1 - p))));
  }
  return schedule;
}

SolverResult gp_se(Simulator& sim, const ProfileGrid& grid,
                   const KernelSpec& spec, double lambda, long budget,
                   const GpSeOptions& options) {
  const int n = grid.n();
  const int m = grid.m();
  if (n < 2 || m < 2) {
    throw parameter_error("GP-SE needs at least two strategies per player");
  }
  const long profiles = static_cast<long>(grid.size());
  const PhaseSchedule schedule = phase_lengths(budget, profiles);
  spec.validate();
  if (!(lambda > 0.0)) throw parameter_error("lambda must be positive");

  const auto start = std::chrono::steady_clock::now();
  SolverResult result;
  std::vector<char> alive(static_cast<std::size_t>(profiles), 1);
  std::vector<long> counts(static_cast<std::size_t>(profiles), 0);
  std::vector<double> sums(static_cast<std::size_t>(profiles), 0.0);
  long t = 0;

  for (long p = 1; p <= profiles - 1; ++p) {
    const long reps = schedule.t_p[static_cast<std::size_t>(p)] -
                      schedule.t_p[static_cast<std::size_t>(p - 1)];
    for (int f = 0; f < grid.size(); ++f) {
      if (!alive[static_cast<std::size_t>(f)]) continue;
      for (long r = 0; r < reps; ++r) {
        const double value = sim.query(grid.profile_flat(f));
        ++t;
        counts[static_cast<std::size_t>(f)] += 1;
        sums[static_cast<std::size_t>(f)] += value;
        if (options.keep_query_log) {
          const auto [i, j] = grid.unflat(f);
          result.query_log.push_back(QueryRecord{t, i, j, value});
        }
      }
    }

    std::vector<double> mu(static_cast<std::size_t>(profiles), 0.0);
    if (options.independent_means) {
      const double ratio = lambda / spec.prior_variance;
      for (int f = 0; f < grid.size(); ++f) {
        const auto fz = static_cast<std::size_t>(f);
        mu[fz] = sums[fz] / (static_cast<double>(counts[fz]) + ratio);
      }
    } else {
      std::vector<double> means(static_cast<std::size_t>(profiles), 0.0);
      for (int f = 0; f < grid.size(); ++f) {
        const auto fz = static_cast<std::size_t>(f);
        if (counts[fz] > 0) {
          means[fz] = sums[fz] / static_cast<double>(counts[fz]);
        }
      }
      const GPPosterior posterior =
          GPPosterior::from_aggregates(grid, spec, lambda, counts, means);
      for (int f = 0; f < grid.size(); ++f) {
        mu[static_cast<std::size_t>(f)] = posterior.mean(f);
      }
    }

    // The row holding the weakest surviving profile ...
    int global_min = -1;
    for (int f = 0; f < grid.size(); ++f) {
      if (!alive[static_cast<std::size_t>(f)]) continue;
      if (global_min < 0 ||
          mu[static_cast<std::size_t>(f)] < mu[static_cast<std::size_t>(global_min)]) {
        global_min = f;
      }
    }
    const int x_p = grid.unflat(global_min).first;

    // ... loses its best surviving cell.
    int y_p = -1;
    for (int j = 0; j < m; ++j) {
      const int f = grid.flat(x_p, j);
      if (!alive[static_cast<std::size_t>(f)]) continue;
      if (y_p < 0 || mu[static_cast<std::size_t>(f)] >
                         mu[static_cast<std::size_t>(grid.flat(x_p, y_p))]) {
        y_p = j;
      }
    }
    alive[static_cast<std::size_t>(grid.flat(x_p, y_p))] = 0;
  }

  for (int f = 0; f < grid.size(); ++f) {
    if (alive[static_cast<std::size_t>(f)]) {
      const auto [i, j] = grid.unflat(f);
      result.x_index = i;
      result.y_index = j;
    }
  }
  result.rounds_used = t;
  result.terminated = true;
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

void write_query_log_csv(const SolverResult& result, std::ostream& out) {
  out << "t,x_index,y_index,u_tilde\n";
  for (const auto& record : result.query_log) {
    out << record.t << ',' << record.x_index << ',' << record.y_index << ','
        << format_double(record.value) << '\n';
  }
}

}  // namespace sbg
