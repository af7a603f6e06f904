#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sbg/grid.hpp"
#include "sbg/rng.hpp"

namespace sbg {

// A finite two-player zero-sum game: strategy grid plus the first player's
// utility table.  Immutable after construction; freely shareable.
struct FiniteGame {
  FiniteGame(ProfileGrid grid, UtilityTable table);

  ProfileGrid grid;
  UtilityTable table;

  int n() const { return table.n; }
  int m() const { return table.m; }
  double u(int i, int j) const { return table.at(i, j); }
};

struct MaximinResult {
  int x_index = 0;
  int y_index = 0;  // second player's best response to x_index
  double value = 0.0;
};

// Second player's best response to row x: argmin over the row, lowest index
// on ties.
int best_response(const FiniteGame& game, int x_index);

// Exact maximin by full enumeration; lowest-index tie-breaks.
MaximinResult brute_force_maximin(const FiniteGame& game);

// u(x, y*(x)) for every row.
std::vector<double> row_values(const FiniteGame& game);

// Distinctness of the best and second-best maximin row values (the validity
// check used to reject degenerate random draws).  Games with a single row
// are degenerate by convention.
bool is_nondegenerate(const FiniteGame& game, double tol = 1e-9);

// Grid size per dimension guaranteeing discretization error at most eps with
// probability 1 - delta/2 under kernel-smoothness constants (a, b):
// ceil(b / (2 eps) * sqrt(log(4a / delta))) + 1, never below 2.
int k_epsilon(double eps, double delta, double a, double b);

// K x K game sampling an evaluable utility at the equally spaced points
// i / (K - 1).
FiniteGame discretize(const std::function<double(double, double)>& utility,
                      int points_per_side);

// Exact covering radii of finite strategy sets over the continuum [0, 1].
std::pair<double, double> covering_distances(const std::vector<double>& xs,
                                             const std::vector<double>& ys);

// High-probability error radius b sqrt(log(4a/delta)) max{dx, dy} for a
// maximin profile of an arbitrary finite discretization.
double arbitrary_discretization_bound(double delta, double a, double b,
                                      double dx_max, double dy_max);

// Empirical epsilon: map the returned first-player strategy to the nearest
// reference column and measure |u(pi*_ref) - u(x, y*_ref(x))| on the
// reference game.
double eps_hat(const Profile& returned, const FiniteGame& reference);

// --- simulator contract ----------------------------------------------------

// Black-box noisy utility oracle.  Each query returns one draw and bumps the
// query counter by exactly one.  Single-caller: the owner serializes access.
class Simulator {
 public:
  virtual ~Simulator() = default;

  double query(const Profile& profile) {
    ++queries_;
    return sample(profile);
  }

  long queries() const { return queries_; }

 protected:
  virtual double sample(const Profile& profile) = 0;

 private:
  long queries_ = 0;
};

// Table-backed simulator with additive Gaussian noise N(0, lambda); profiles
// are snapped to the nearest grid point.  lambda = 0 gives a noiseless
// oracle for tests.
class TableSimulator : public Simulator {
 public:
  TableSimulator(FiniteGame game, double lambda, std::uint64_t seed);

  const FiniteGame& game() const { return game_; }

 protected:
  double sample(const Profile& profile) override;

 private:
  FiniteGame game_;
  double lambda_;
  double noise_sd_;
  Rng rng_;
};

// --- serialization ----------------------------------------------------------

// JSON document {"u": [[...]], "xs": [...], "ys": [...]}; round-trip exact
// for 64-bit floats.
std::string game_to_json(const FiniteGame& game);
FiniteGame game_from_json(const std::string& text);
void save_game(const FiniteGame& game, const std::string& path);
FiniteGame load_game(const std::string& path);

}  // namespace sbg
