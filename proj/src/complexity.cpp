#include "sbg/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sbg {

namespace {

constexpr double kDegeneracyTol = 1e-9;

struct RowSummary {
  std::vector<double> values;  // u(x, y*(x))
  int x_star = 0;
  int x_star2 = 0;
};

RowSummary summarize_rows(const FiniteGame& game) {
  if (game.n() < 2 || game.m() < 1) {
    throw parameter_error("hardness terms need at least two rows");
  }
  RowSummary s;
  s.values = row_values(game);
  s.x_star = 0;
  for (int i = 1; i < game.n(); ++i) {
    if (s.values[static_cast<std::size_t>(i)] >
        s.values[static_cast<std::size_t>(s.x_star)]) {
      s.x_star = i;
    }
  }
  s.x_star2 = s.x_star == 0 ? 1 : 0;
  for (int i = 0; i < game.n(); ++i) {
    if (i == s.x_star) continue;
    if (s.values[static_cast<std::size_t>(i)] >
        s.values[static_cast<std::size_t>(s.x_star2)]) {
      s.x_star2 = i;
    }
  }
  if (std::abs(s.values[static_cast<std::size_t>(s.x_star)] -
               s.values[static_cast<std::size_t>(s.x_star2)]) <= kDegeneracyTol) {
    throw parameter_error(
        "degenerate game: best and second-best maximin values coincide");
  }
  return s;
}

std::vector<double> sorted_gaps(const FiniteGame& game) {
  const MaximinResult star = brute_force_maximin(game);
  const int star_flat = game.grid.flat(star.x_index, star.y_index);
  std::vector<double> gaps;
  gaps.reserve(static_cast<std::size_t>(game.grid.size()));
  double smallest_nonzero = std::numeric_limits<double>::infinity();
  for (int f = 0; f < game.grid.size(); ++f) {
    if (f == star_flat) continue;
    const auto [i, j] = game.grid.unflat(f);
    const double gap = std::abs(star.value - game.u(i, j));
    if (gap <= kDegeneracyTol) {
      throw parameter_error(
          "degenerate game: a profile ties the maximin value exactly");
    }
    smallest_nonzero = std::min(smallest_nonzero, gap);
    gaps.push_back(gap);
  }
  if (gaps.empty()) {
    throw parameter_error("hardness terms need at least two profiles");
  }
  // Best-arm convention: the maximin profile contributes the smallest
  // nonzero gap instead of zero.
  gaps.push_back(smallest_nonzero);
  std::sort(gaps.begin(), gaps.end());
  return gaps;
}

}  // namespace

double h_star(const FiniteGame& game) {
  const RowSummary rows = summarize_rows(game);
  const double midpoint = (rows.values[static_cast<std::size_t>(rows.x_star)] +
                           rows.values[static_cast<std::size_t>(rows.x_star2)]) /
                          2.0;
  double sum = 0.0;
  for (int i = 0; i < game.n(); ++i) {
    const double row_value = rows.values[static_cast<std::size_t>(i)];
    for (int j = 0; j < game.m(); ++j) {
      const double d1 = game.u(i, j) - row_value;
      const double d2 = midpoint - row_value;
      const double denom = std::max(d1 * d1, d2 * d2);
      if (denom <= 1e-18) {
        throw parameter_error(
            "degenerate game: a profile has no usable hardness gap");
      }
      sum += 1.0 / denom;
    }
  }
  return sum;
}

double h_one(const FiniteGame& game) {
  double sum = 0.0;
  for (const double gap : sorted_gaps(game)) sum += 1.0 / (gap * gap);
  return sum;
}

double h_two(const FiniteGame& game) {
  const auto gaps = sorted_gaps(game);
  double best = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    best = std::max(best, static_cast<double>(i + 1) / (gaps[i] * gaps[i]));
  }
  return best;
}

HardnessProfile hardness(const FiniteGame& game) {
  HardnessProfile h;
  const RowSummary rows = summarize_rows(game);
  h.x_star = rows.x_star;
  h.x_star2 = rows.x_star2;
  h.midpoint = (rows.values[static_cast<std::size_t>(rows.x_star)] +
                rows.values[static_cast<std::size_t>(rows.x_star2)]) /
               2.0;
  h.h_star = h_star(game);
  h.gaps_sorted = sorted_gaps(game);
  h.h_one = 0.0;
  h.h_two = 0.0;
  for (std::size_t i = 0; i < h.gaps_sorted.size(); ++i) {
    const double g2 = h.gaps_sorted[i] * h.gaps_sorted[i];
    h.h_one += 1.0 / g2;
    h.h_two = std::max(h.h_two, static_cast<double>(i + 1) / g2);
  }
  return h;
}

double t_delta_bound(double h_star, double lambda, int n, int m, double delta) {
  if (!(h_star > 0.0)) throw parameter_error("H* must be positive");
  if (!(lambda > 0.0)) throw parameter_error("lambda must be positive");
  if (n < 1 || m < 1) throw parameter_error("n, m must be positive");
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw parameter_error("delta must lie in (0, 1)");
  }
  const double root = std::sqrt(static_cast<double>(n) * m / (6.0 * delta));
  const double requirement = 64.0 * lambda * std::numbers::pi * root;
  if (!(requirement > 4.85)) {
    throw parameter_error(
        "bound requires 64 lambda pi sqrt(nm / (6 delta)) > 4.85");
  }
  const double scale = 64.0 * h_star * lambda;
  const double inner = scale * std::numbers::pi * root;
  const double log_inner = std::log(inner);
  if (!(log_inner > 0.0)) {
    throw parameter_error("bound undefined: log term is not positive");
  }
  return scale * (log_inner + 2.0 * std::log(log_inner));
}

long t_delta_inf(double h_star, double lambda, int n, int m, double sigma2,
                 const BtSchedule& bt) {
  if (!(h_star > 0.0)) throw parameter_error("H* must be positive");
  if (!(lambda > 0.0)) throw parameter_error("lambda must be positive");
  if (!(sigma2 > 0.0) || sigma2 > 1.0) {
    throw parameter_error("sigma2 must lie in (0, 1]");
  }
  if (!bt) throw parameter_error("exploration schedule required");
  const double offset = lambda * static_cast<double>(n) * m / sigma2;
  constexpr long kScanCap = 100'000'000;
  for (long t = 1; t <= kScanCap; ++t) {
    if (8.0 * h_star * bt(t) * lambda - offset < static_cast<double>(t)) {
      return t;
    }
  }
  throw numeric_error("t_delta_inf scan exceeded 1e8 rounds");
}

double delta_t(long budget, long profiles, int n, int m, double lambda,
               double h_two) {
  const double exponent =
      -static_cast<double>(budget - profiles) /
      (8.0 * lambda * log_bar(profiles) * h_two);
  return 2.0 * static_cast<double>(profiles) * static_cast<double>(n + m - 2) *
         std::exp(exponent);
}

double delta_t_eps(long budget, double eps, double delta, double a, double b,
                   double lambda, double h_two) {
  const int k = k_epsilon(eps, delta, a, b);
  const long k2 = static_cast<long>(k) * k;
  if (budget <= k2) {
    throw parameter_error("budget must exceed K_epsilon^2 profiles");
  }
  const double km1 = static_cast<double>(k - 1);
  const double first =
      4.0 * static_cast<double>(k2) * km1 *
      std::exp(-static_cast<double>(budget - k2) /
               (8.0 * lambda * log_bar(k2) * h_two));
  const double second =
      2.0 * a * std::exp(-b * b / (4.0 * eps * eps * km1 * km1));
  return first + second;
}

DeltaOptResult delta_opt(long budget, double eps, double a, double b,
                         double lambda,
                         const std::function<double(int)>& h_two_of_k) {
  if (!h_two_of_k) throw parameter_error("h_two provider required");

  const auto objective = [&](double delta) -> double {
    const int k = k_epsilon(eps, delta, a, b);
    return delta_t_eps(budget, eps, delta, a, b, lambda, h_two_of_k(k));
  };
  const auto try_objective = [&](double delta, double& value) -> bool {
    try {
      value = objective(delta);
      return std::isfinite(value);
    } catch (const parameter_error&) {
      return false;
    }
  };

  constexpr double kLo = 1e-6;
  constexpr double kHi = 1.0 - 1e-6;
  DeltaOptResult best;
  bool found = false;
  for (int i = 1; i <= 999; ++i) {
    const double delta = static_cast<double>(i) / 1000.0;
    double value = 0.0;
    if (!try_objective(delta, value)) continue;
    if (!found || value < best.objective) {
      best = DeltaOptResult{delta, value};
      found = true;
    }
  }
  if (!found) {
    throw parameter_error(
        "delta_opt infeasible: budget below K_epsilon^2 for every grid delta");
  }

  // Golden-section refinement inside the bracketing cell.  The objective is
  // only piecewise smooth (K_epsilon jumps with delta), so the grid optimum
  // is kept as a fallback.
  double lo = std::max(kLo, best.delta - 1e-3);
  double hi = std::min(kHi, best.delta + 1e-3);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo);
  double d = lo + gr * (hi - lo);
  for (int iter = 0; iter < 60 && hi - lo > 1e-12; ++iter) {
    double fc = std::numeric_limits<double>::infinity();
    double fd = std::numeric_limits<double>::infinity();
    try_objective(c, fc);
    try_objective(d, fd);
    if (fc < fd) {
      hi = d;
      d = c;
      c = hi - gr * (hi - lo);
    } else {
      lo = c;
      c = d;
      d = lo + gr * (hi - lo);
    }
    const double mid = (lo + hi) / 2.0;
    double fm = 0.0;
    if (try_objective(mid, fm) && fm < best.objective) {
      best = DeltaOptResult{mid, fm};
    }
  }
  return best;
}

}  // namespace sbg
