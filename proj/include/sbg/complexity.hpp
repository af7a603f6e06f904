#pragma once

#include <functional>
#include <vector>

#include "sbg/games.hpp"
#include "sbg/solvers.hpp"

namespace sbg {

// Problem-hardness summary of a finite game.
struct HardnessProfile {
  double h_star = 0.0;
  double h_one = 0.0;
  double h_two = 0.0;
  std::vector<double> gaps_sorted;  // Delta_(1) <= ... <= Delta_(P)
  int x_star = 0;                   // maximin row
  int x_star2 = 0;                  // runner-up row
  double midpoint = 0.0;            // (u(pi*) + u(x**, y*(x**))) / 2
};

// H*(u) = sum over profiles of 1 / max{(u(pi) - u(x, y*(x)))^2,
// (midpoint - u(x, y*(x)))^2}.  Throws on degenerate games (best and
// second-best maximin rows tie).
double h_star(const FiniteGame& game);

// H1 = sum 1 / Delta_(i)^2 and H2 = max_i i / Delta_(i)^2 over the sorted
// gaps to the maximin value; the maximin profile's own zero gap is replaced
// by the smallest nonzero gap (best-arm convention).
double h_one(const FiniteGame& game);
double h_two(const FiniteGame& game);

HardnessProfile hardness(const FiniteGame& game);

// Closed-form round bound of the fixed-confidence solver:
// 64 H* lambda (log(z) + 2 log log(z)) with z = 64 H* lambda pi
// sqrt(nm / (6 delta)); requires 64 lambda pi sqrt(nm / (6 delta)) > 4.85.
double t_delta_bound(double h_star, double lambda, int n, int m, double delta);

// Smallest t with 8 H* b_t lambda - lambda n m / sigma^2 < t.
long t_delta_inf(double h_star, double lambda, int n, int m, double sigma2,
                 const BtSchedule& bt);

// Fixed-budget failure bound
// 2 P (n + m - 2) exp(-(T - P) / (8 lambda log_bar(P) H2)).  May exceed 1;
// callers clamp for reporting.
double delta_t(long budget, long profiles, int n, int m, double lambda,
               double h_two);

inline double clamp_confidence(double delta) {
  return delta > 1.0 ? 1.0 : delta;
}

// Discretized fixed-budget bound: with K = k_epsilon(eps, delta, a, b),
// 4 K^2 (K - 1) exp(-(T - K^2) / (8 lambda log_bar(K^2) H2))
//   + 2 a exp(-b^2 / (4 eps^2 (K - 1)^2)).
double delta_t_eps(long budget, double eps, double delta, double a, double b,
                   double lambda, double h_two);

struct DeltaOptResult {
  double delta = 0.0;      // minimizing confidence parameter
  double objective = 0.0;  // delta_{T,eps} at that parameter
};

// Minimize delta_t_eps over delta in (1e-6, 1 - 1e-6): 1e-3 grid scan plus
// golden-section refinement around the best cell.  h_two_of_k supplies the
// hardness for a given grid size.  Throws if no grid point is feasible.
DeltaOptResult delta_opt(long budget, double eps, double a, double b,
                         double lambda,
                         const std::function<double(int)>& h_two_of_k);

}  // namespace sbg
