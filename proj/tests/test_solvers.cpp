#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sbg/detail/lucb_beliefs.hpp"
#include "sbg/games.hpp"
#include "sbg/solvers.hpp"

using namespace sbg;

namespace {

FiniteGame example_game() {
  UtilityTable table(2, 2);
  table.at(0, 0) = 1.0;
  table.at(0, 1) = 0.5;
  table.at(1, 0) = 0.2;
  table.at(1, 1) = 0.8;
  return FiniteGame(ProfileGrid::uniform(2), table);
}

// Diagonal kernel: SE with a tiny length scale underflows off-diagonal
// covariances to exactly zero on the unit grid.
KernelSpec diagonal_kernel() { return KernelSpec::squared_exponential(1e-3); }

}  // namespace

TEST_CASE("theorem exploration term at t = 2") {
  const auto bt = theorem_bt(2, 2, 0.1);
  CHECK(bt(2) == doctest::Approx(11.145748235409144).epsilon(1e-12));
  const auto bt3 = corollary_bt(2, 2, 0.1);
  CHECK(bt3(2) - bt(2) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("phase lengths") {
  CHECK(log_bar(2) == doctest::Approx(1.0));
  CHECK(log_bar(4) == doctest::Approx(1.5833333333333333));

  const auto schedule = phase_lengths(100, 4);
  REQUIRE(schedule.t_p.size() == 4);
  CHECK(schedule.t_p[0] == 0);
  CHECK(schedule.t_p[1] == 16);
  CHECK(schedule.t_p[2] == 21);
  CHECK(schedule.t_p[3] == 31);
  CHECK(schedule.total_queries() == 99);

  CHECK(phase_lengths(10, 2).t_p[1] == 4);
  CHECK_THROWS_AS(phase_lengths(4, 4), parameter_error);
  CHECK_THROWS_AS(phase_lengths(10, 1), parameter_error);
}

TEST_CASE("phase schedule never exceeds the budget") {
  Rng rng(8088);
  for (int rep = 0; rep < 1000; ++rep) {
    const long profiles = 2 + static_cast<long>(rng.uniform() * 40);
    const long budget = profiles + 1 + static_cast<long>(rng.uniform() * 5000);
    const auto schedule = phase_lengths(budget, profiles);
    long sum = 0;
    for (std::size_t p = 1; p < schedule.t_p.size(); ++p) {
      CHECK(schedule.t_p[p] >= schedule.t_p[p - 1]);
      sum += schedule.t_p[p];
    }
    sum += schedule.t_p.back();
    CHECK(sum <= budget);
    CHECK(schedule.total_queries() <= budget);
  }
}

TEST_CASE("GP-SE on the noiseless 2x2 example") {
  const auto game = example_game();
  TableSimulator sim(game, 0.0, 4);
  const auto result = gp_se(sim, game.grid, diagonal_kernel(), 1e-8, 100);

  CHECK(result.x_index == 0);
  CHECK(result.y_index == 1);
  CHECK(result.terminated);
  CHECK(result.rounds_used == 99);
  CHECK(sim.queries() == 99);
  REQUIRE(result.query_log.size() == 99);

  // Phase counts: every survivor reaches cumulative count t_p at the end of
  // phase p; the first elimination is (x2, y2).
  std::vector<long> counts(4, 0);
  for (std::size_t q = 0; q < 64; ++q) {
    const auto& record = result.query_log[q];
    counts[static_cast<std::size_t>(record.x_index * 2 + record.y_index)]++;
  }
  CHECK(counts == std::vector<long>{16, 16, 16, 16});
  for (std::size_t q = 64; q < 79; ++q) {
    const auto& record = result.query_log[q];
    CHECK(record.x_index * 2 + record.y_index != 3);  // (1,1) was dismissed
  }
}

TEST_CASE("GP-SE respects preconditions") {
  const auto game = example_game();
  TableSimulator sim(game, 0.0, 1);
  CHECK_THROWS_AS(gp_se(sim, game.grid, diagonal_kernel(), 1e-8, 4),
                  parameter_error);
  const ProfileGrid degenerate({0.5}, {0.0, 1.0});
  CHECK_THROWS_AS(gp_se(sim, degenerate, diagonal_kernel(), 1e-8, 100),
                  parameter_error);
}

TEST_CASE("GP-SE elimination matches brute force on distinct-valued games") {
  // All 2x3 tables whose entries are a permutation of {0..5} scaled into
  // [0, 1]; noiseless simulator, near-exact posterior means.
  std::vector<int> values = {0, 1, 2, 3, 4, 5};
  const auto grid = ProfileGrid({0.0, 1.0}, {0.0, 0.5, 1.0});
  int checked = 0;
  std::sort(values.begin(), values.end());
  do {
    UtilityTable table(2, 3);
    for (int f = 0; f < 6; ++f) {
      table.values[static_cast<std::size_t>(f)] =
          static_cast<double>(values[static_cast<std::size_t>(f)]) / 5.0;
    }
    const FiniteGame game(grid, table);
    const auto expected = brute_force_maximin(game);
    TableSimulator sim(game, 0.0, 99);
    GpSeOptions options;
    options.keep_query_log = false;
    const auto result =
        gp_se(sim, game.grid, diagonal_kernel(), 1e-9, 40, options);
    CHECK(result.x_index == expected.x_index);
    CHECK(result.y_index == expected.y_index);
    ++checked;
  } while (std::next_permutation(values.begin(), values.end()));
  CHECK(checked == 720);
}

TEST_CASE("GP-SE independent-means toggle finds the same survivor here") {
  const auto game = example_game();
  GpSeOptions options;
  options.independent_means = true;
  TableSimulator sim(game, 0.0, 4);
  const auto result = gp_se(sim, game.grid, diagonal_kernel(), 1e-8, 100, options);
  CHECK(result.x_index == 0);
  CHECK(result.y_index == 1);
}

TEST_CASE("M-GP-LUCB identifies the 2x2 maximin with near-noiseless queries") {
  const auto game = example_game();
  int correct = 0;
  for (int seed = 0; seed < 30; ++seed) {
    TableSimulator sim(game, 1e-8, static_cast<std::uint64_t>(seed));
    LucbOptions options;
    options.delta = 0.1;
    options.epsilon = 0.0;
    options.round_cap = 10000;
    const auto result =
        m_gp_lucb(sim, game.grid, KernelSpec::squared_exponential(0.5), 1e-8,
                  options);
    CHECK(result.terminated);
    CHECK(result.rounds_used % 2 == 0);
    CHECK(result.rounds_used == static_cast<long>(result.query_log.size()));
    // The two queries of each step target different first-player strategies.
    for (std::size_t q = 0; q + 1 < result.query_log.size(); q += 2) {
      CHECK(result.query_log[q].x_index != result.query_log[q + 1].x_index);
    }
    if (result.x_index == 0 && result.y_index == 1) ++correct;
  }
  CHECK(correct == 30);
}

TEST_CASE("M-GP-LUCB candidates can be replayed from the query log") {
  const auto game = example_game();
  TableSimulator sim(game, 0.01, 7);
  LucbOptions options;
  options.delta = 0.1;
  options.round_cap = 400;
  const auto spec = KernelSpec::squared_exponential(0.5);
  const double lambda = 0.01;
  const auto result = m_gp_lucb(sim, game.grid, spec, lambda, options);

  // Recompute the selection at every even round from a fresh posterior and
  // compare with the logged pair.
  GPPosterior post(game.grid, spec, lambda);
  const auto bt = theorem_bt(2, 2, options.delta);
  for (std::size_t q = 0; q + 1 < result.query_log.size(); q += 2) {
    const long t = static_cast<long>(q);
    const double b = bt(std::max<long>(t, 1));
    int xbar = 0, cand_y = 0;
    double best_row = -1e300;
    std::vector<int> gamma(2, 0);
    for (int i = 0; i < 2; ++i) {
      double min_l = 1e300, min_mu = 1e300;
      for (int j = 0; j < 2; ++j) {
        const int f = game.grid.flat(i, j);
        const double mu = post.mean(f);
        const double l = mu - std::sqrt(b) * post.stddev(f);
        if (l < min_l) {
          min_l = l;
          gamma[static_cast<std::size_t>(i)] = j;
        }
        min_mu = std::min(min_mu, mu);
      }
      if (min_mu > best_row) {
        best_row = min_mu;
        xbar = i;
      }
    }
    cand_y = gamma[static_cast<std::size_t>(xbar)];
    CHECK(result.query_log[q].x_index == xbar);
    CHECK(result.query_log[q].y_index == cand_y);
    const int other = 1 - xbar;
    CHECK(result.query_log[q + 1].x_index == other);
    CHECK(result.query_log[q + 1].y_index == gamma[static_cast<std::size_t>(other)]);

    post.update(game.grid.flat(result.query_log[q].x_index,
                               result.query_log[q].y_index),
                result.query_log[q].value);
    post.update(game.grid.flat(result.query_log[q + 1].x_index,
                               result.query_log[q + 1].y_index),
                result.query_log[q + 1].value);
  }
}

TEST_CASE("round cap returns the current candidate without termination") {
  UtilityTable flat_table(2, 2, 0.0);
  const FiniteGame game(ProfileGrid::uniform(2), flat_table);
  TableSimulator sim(game, 0.1, 3);
  LucbOptions options;
  options.round_cap = 4;
  const auto result = m_gp_lucb(sim, game.grid,
                                KernelSpec::squared_exponential(0.5), 0.1,
                                options);
  CHECK_FALSE(result.terminated);
  CHECK(result.rounds_used == 4);

  options.round_cap = 5;  // rounded up to 6
  TableSimulator sim2(game, 0.1, 3);
  const auto result2 = m_gp_lucb(sim2, game.grid,
                                 KernelSpec::squared_exponential(0.5), 0.1,
                                 options);
  CHECK(result2.rounds_used == 6);
}

TEST_CASE("LUCB solvers reject degenerate grids") {
  const auto game = example_game();
  TableSimulator sim(game, 0.1, 1);
  const ProfileGrid row({0.5}, {0.0, 1.0});
  LucbOptions options;
  CHECK_THROWS_AS(
      m_gp_lucb(sim, row, KernelSpec::squared_exponential(0.5), 0.1, options),
      parameter_error);
  CHECK_THROWS_AS(m_g_lucb(sim, row, 0.1, 1.0, options), parameter_error);
  CHECK_THROWS_AS(m_lucb(sim, row, 1.0, options), parameter_error);
}

TEST_CASE("diagonal belief coincides with the GP belief on diagonal kernels") {
  const auto grid = ProfileGrid::uniform(2);
  detail::GpBelief gp(grid, diagonal_kernel(), 0.1);
  detail::DiagonalGaussianBelief diag(grid.size(), 0.1, 1.0);
  Rng rng(1);
  for (int s = 0; s < 50; ++s) {
    const int f = static_cast<int>(rng.uniform() * 4);
    const double value = rng.normal();
    gp.observe(f, value);
    diag.observe(f, value);
    for (int g = 0; g < 4; ++g) {
      CHECK(gp.mean(g) == doctest::Approx(diag.mean(g)).epsilon(1e-8));
      CHECK(gp.halfwidth(g, 11.0) ==
            doctest::Approx(diag.halfwidth(g, 11.0)).epsilon(1e-8));
    }
  }
}

TEST_CASE("diagonal posterior mean is the precision-weighted sample mean") {
  detail::DiagonalGaussianBelief belief(1, 0.1, 1.0);
  double sum = 0.0;
  for (int s = 0; s < 7; ++s) {
    const double v = 0.3 + 0.1 * s;
    belief.observe(0, v);
    sum += v;
  }
  const double expected = (sum / 7.0) * 7.0 / (7.0 + 0.1);
  CHECK(belief.mean(0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("sample-mean half-widths scale linearly in the range") {
  detail::SampleMeanBelief narrow(1, 1.0);
  detail::SampleMeanBelief wide(1, 2.0);
  CHECK(narrow.halfwidth(0, 10.0) == std::numeric_limits<double>::infinity());
  narrow.observe(0, 0.4);
  wide.observe(0, 0.4);
  narrow.observe(0, 0.6);
  wide.observe(0, 0.6);
  // Range 1 gives the unscaled Hoeffding width sqrt(b / (2N)).
  CHECK(narrow.halfwidth(0, 10.0) ==
        doctest::Approx(std::sqrt(10.0 / 4.0)).epsilon(1e-12));
  CHECK(wide.halfwidth(0, 10.0) ==
        doctest::Approx(2.0 * narrow.halfwidth(0, 10.0)).epsilon(1e-12));
  CHECK(wide.mean(0) == narrow.mean(0));
}

TEST_CASE("baselines identify the noiseless 2x2 maximin") {
  const auto game = example_game();
  for (int seed = 0; seed < 30; ++seed) {
    TableSimulator sim_g(game, 1e-8, static_cast<std::uint64_t>(seed));
    LucbOptions options;
    options.round_cap = 20000;
    const auto g_result = m_g_lucb(sim_g, game.grid, 1e-8, 1.0, options);
    CHECK(g_result.x_index == 0);
    CHECK(g_result.y_index == 1);

    TableSimulator sim_l(game, 1e-8, static_cast<std::uint64_t>(seed));
    const auto l_result = m_lucb(sim_l, game.grid, 0.8, options);
    CHECK(l_result.x_index == 0);
    CHECK(l_result.y_index == 1);
  }
}

TEST_CASE("query log CSV export") {
  SolverResult result;
  result.query_log.push_back(QueryRecord{1, 0, 1, 0.5});
  result.query_log.push_back(QueryRecord{2, 1, 0, -0.25});
  std::ostringstream out;
  write_query_log_csv(result, out);
  CHECK(out.str() == "t,x_index,y_index,u_tilde\n1,0,1,0.5\n2,1,0,-0.25\n");
}
