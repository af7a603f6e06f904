#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sbg/games.hpp"
#include "sbg/gp.hpp"
#include "sbg/rng.hpp"

using namespace sbg;

namespace {

FiniteGame make_game(std::vector<double> xs, std::vector<double> ys,
                     std::vector<std::vector<double>> u) {
  UtilityTable table(static_cast<int>(u.size()),
                     static_cast<int>(u[0].size()));
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = 0; j < u[i].size(); ++j) {
      table.at(static_cast<int>(i), static_cast<int>(j)) = u[i][j];
    }
  }
  return FiniteGame(ProfileGrid(std::move(xs), std::move(ys)), std::move(table));
}

FiniteGame example_game() {
  return make_game({0.0, 1.0}, {0.0, 1.0}, {{1.0, 0.5}, {0.2, 0.8}});
}

}  // namespace

TEST_CASE("brute-force maximin on the 2x2 example") {
  const auto game = example_game();
  const auto result = brute_force_maximin(game);
  CHECK(result.x_index == 0);
  CHECK(result.y_index == 1);
  CHECK(result.value == doctest::Approx(0.5));
}

TEST_CASE("constant table ties break to the lowest indices") {
  const auto game = make_game({0.0, 1.0}, {0.0, 1.0}, {{2.0, 2.0}, {2.0, 2.0}});
  const auto result = brute_force_maximin(game);
  CHECK(result.x_index == 0);
  CHECK(result.y_index == 0);
  CHECK(result.value == doctest::Approx(2.0));
}

TEST_CASE("degenerate single-row game returns the row minimum") {
  const auto game = make_game({0.5}, {0.0, 0.5, 1.0}, {{0.7, 0.1, 0.4}});
  const auto result = brute_force_maximin(game);
  CHECK(result.x_index == 0);
  CHECK(result.y_index == 1);
  CHECK(result.value == doctest::Approx(0.1));
}

TEST_CASE("best response with ties") {
  const auto game = make_game({0.0, 0.5, 1.0}, {0.0, 1.0},
                              {{1.0, 0.5}, {0.2, 0.8}, {0.3, 0.3}});
  CHECK(best_response(game, 0) == 1);
  CHECK(best_response(game, 1) == 0);
  CHECK(best_response(game, 2) == 0);
  CHECK_THROWS_AS(best_response(game, 3), parameter_error);
}

TEST_CASE("maximin equals max of row minima on random 2x2 games") {
  Rng rng(17);
  for (int rep = 0; rep < 200; ++rep) {
    const auto game = make_game(
        {0.0, 1.0}, {0.0, 1.0},
        {{rng.normal(), rng.normal()}, {rng.normal(), rng.normal()}});
    const auto result = brute_force_maximin(game);
    const double direct = std::max(std::min(game.u(0, 0), game.u(0, 1)),
                                   std::min(game.u(1, 0), game.u(1, 1)));
    CHECK(result.value == doctest::Approx(direct));
  }
}

TEST_CASE("k_epsilon examples") {
  CHECK(k_epsilon(0.1, 0.1, 1.0, 1.0) == 11);
  CHECK(k_epsilon(10.0, 0.1, 1.0, 1.0) == 2);
  CHECK(k_epsilon(1.0, 0.5, 1.0, 1.0) == 2);
  CHECK_THROWS_AS(k_epsilon(0.0, 0.1, 1.0, 1.0), parameter_error);
  CHECK_THROWS_AS(k_epsilon(0.1, 2.0, 1.0, 1.0), parameter_error);
  CHECK_THROWS_AS(k_epsilon(0.1, -0.1, 1.0, 1.0), parameter_error);
  CHECK_THROWS_AS(k_epsilon(0.1, 0.1, 0.0, 1.0), parameter_error);
  CHECK_THROWS_AS(k_epsilon(0.1, 0.1, 1.0, 0.0), parameter_error);
}

TEST_CASE("k_epsilon monotonicity") {
  Rng rng(31);
  for (int rep = 0; rep < 200; ++rep) {
    const double eps = 0.01 + rng.uniform() * 0.5;
    const double delta = 0.01 + rng.uniform() * 0.5;
    const double a = 0.5 + rng.uniform() * 2.0;
    const double b = 0.1 + rng.uniform() * 3.0;
    CHECK(k_epsilon(eps, delta, a, b) >= k_epsilon(eps * 1.5, delta, a, b));
    CHECK(k_epsilon(eps, delta, a, b) <= k_epsilon(eps, delta, a, b * 1.5));
    CHECK(k_epsilon(eps, delta, a, b) <= k_epsilon(eps, delta / 2.0, a, b));
  }
}

TEST_CASE("discretize x - y on K = 3") {
  const auto game = discretize([](double x, double y) { return x - y; }, 3);
  const std::vector<double> expected = {0.0, -0.5, -1.0, 0.5, 0.0,
                                        -0.5, 1.0, 0.5,  0.0};
  for (int f = 0; f < 9; ++f) {
    const auto [i, j] = game.grid.unflat(f);
    CHECK(game.u(i, j) == doctest::Approx(expected[static_cast<std::size_t>(f)]));
  }
  const auto result = brute_force_maximin(game);
  CHECK(result.x_index == 2);
  CHECK(result.y_index == 2);
  CHECK(result.value == doctest::Approx(0.0));
}

TEST_CASE("refining nested grids approaches the sup-inf of x - y") {
  // sup_x inf_y (x - y) = 0; every uniform grid attains it at (1, 1).
  double previous = -1.0;
  for (const int k : {2, 3, 5}) {
    const auto game = discretize([](double x, double y) { return x - y; }, k);
    const auto result = brute_force_maximin(game);
    CHECK(result.value >= previous - 1e-12);
    CHECK(result.value <= 0.0 + 1e-12);
    previous = result.value;
  }
}

TEST_CASE("uniform grids cover the continuum within half a spacing") {
  Rng rng(808);
  for (const int k : {2, 3, 7, 11}) {
    const auto grid = ProfileGrid::uniform(k);
    const double half_spacing = 0.5 / (k - 1);
    for (int rep = 0; rep < 200; ++rep) {
      const double x = rng.uniform();
      const double y = rng.uniform();
      CHECK(std::abs(grid.x(grid.nearest_x(x)) - x) <= half_spacing + 1e-12);
      CHECK(std::abs(grid.y(grid.nearest_y(y)) - y) <= half_spacing + 1e-12);
    }
  }
}

TEST_CASE("covering distances") {
  CHECK(covering_distances({0.0, 1.0}, {0.0, 1.0}).first ==
        doctest::Approx(0.5));
  CHECK(covering_distances({0.0, 0.5, 1.0}, {0.0, 1.0}).first ==
        doctest::Approx(0.25));
  CHECK(covering_distances({0.4}, {0.0, 1.0}).first == doctest::Approx(0.6));
  CHECK_THROWS_AS(covering_distances({}, {0.0}), parameter_error);
}

TEST_CASE("covering distances dominate a dense scan") {
  Rng rng(44);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> pts;
    const int count = 1 + static_cast<int>(rng.uniform() * 6);
    for (int i = 0; i < count; ++i) pts.push_back(rng.uniform());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const double reported = covering_distances(pts, {0.5}).first;
    double scanned = 0.0;
    for (int s = 0; s <= 100000; ++s) {
      const double x = static_cast<double>(s) / 100000.0;
      double nearest = 1.0;
      for (const double p : pts) nearest = std::min(nearest, std::abs(x - p));
      scanned = std::max(scanned, nearest);
    }
    CHECK(scanned <= reported + 1e-5);
    CHECK(reported <= scanned + 1e-5);
  }
}

TEST_CASE("arbitrary discretization bound") {
  CHECK(arbitrary_discretization_bound(0.1, 1.0, 1.0, 0.0, 0.0) ==
        doctest::Approx(0.0));
  CHECK(arbitrary_discretization_bound(0.1, 1.0, 1.0, 0.25, 0.1) ==
        doctest::Approx(0.48016139565996035).epsilon(1e-12));
  // Equally spaced grid with K = 11 points: radius 1/20; consistent with
  // k_epsilon inversion at eps = 0.1.
  CHECK(arbitrary_discretization_bound(0.1, 1.0, 1.0, 0.05, 0.05) ==
        doctest::Approx(0.09603227913199207).epsilon(1e-12));
  CHECK(arbitrary_discretization_bound(0.1, 1.0, 1.0, 0.05, 0.05) <= 0.1);
  CHECK_THROWS_AS(arbitrary_discretization_bound(2.0, 1.0, 1.0, 0.1, 0.1),
                  parameter_error);
}

TEST_CASE("eps_hat on the reference game") {
  const auto reference = example_game();
  CHECK(eps_hat(Profile{0.0, 1.0}, reference) == doctest::Approx(0.0));
  CHECK(eps_hat(Profile{1.0, 0.0}, reference) == doctest::Approx(0.3));
}

TEST_CASE("simulator is unbiased and counts queries") {
  const auto game = example_game();
  TableSimulator sim(game, 0.04, 321);
  const Profile p{0.0, 1.0};
  double sum = 0.0;
  const int reps = 10000;
  for (int s = 0; s < reps; ++s) sum += sim.query(p);
  CHECK(sim.queries() == reps);
  CHECK(std::abs(sum / reps - 0.5) <= 3.0 * std::sqrt(0.04 / reps));
}

TEST_CASE("noiseless simulator returns table values exactly") {
  const auto game = example_game();
  TableSimulator sim(game, 0.0, 1);
  CHECK(sim.query(Profile{0.0, 0.0}) == 1.0);
  CHECK(sim.query(Profile{1.0, 1.0}) == 0.8);
  // Profiles snap to the nearest grid point.
  CHECK(sim.query(Profile{0.1, 0.9}) == 0.5);
}

TEST_CASE("game JSON round-trip is exact") {
  Rng rng(5150);
  for (int rep = 0; rep < 50; ++rep) {
    const auto grid = ProfileGrid::uniform(3);
    UtilityTable table(3, 3);
    for (auto& v : table.values) v = rng.normal() * 1e3;
    const FiniteGame game(grid, table);
    const auto parsed = game_from_json(game_to_json(game));
    CHECK(parsed.grid.xs() == game.grid.xs());
    CHECK(parsed.grid.ys() == game.grid.ys());
    CHECK(parsed.table.values == game.table.values);
  }
}

TEST_CASE("game JSON rejects malformed input") {
  CHECK_THROWS_AS(game_from_json("{"), parameter_error);
  CHECK_THROWS_AS(game_from_json("{\"xs\": [0, 1]}"), parameter_error);
  CHECK_THROWS_AS(
      game_from_json("{\"xs\": [0, 1], \"ys\": [0, 1], \"u\": [[1, 2]]}"),
      parameter_error);
}

TEST_CASE("non-degeneracy check") {
  CHECK(is_nondegenerate(example_game()));
  const auto tied = make_game({0.0, 1.0}, {0.0, 1.0}, {{1.0, 0.5}, {0.5, 0.8}});
  CHECK_FALSE(is_nondegenerate(tied));
}
