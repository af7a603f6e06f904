// sbg: command-line front end for the simulation-based-game solvers.
//
// Subcommands: gen-game, solve, bounds, spitfire, experiment.
// Exit codes: 0 success, 2 parameter error, 3 numeric error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sbg/complexity.hpp"
#include "sbg/gp.hpp"
#include "sbg/harness.hpp"
#include "sbg/solvers.hpp"
#include "sbg/spitfire.hpp"

namespace {

sbg::KernelSpec make_kernel(const std::string& kind, double length_scale,
                            double nu, double prior_variance) {
  if (kind == "se") {
    return sbg::KernelSpec::squared_exponential(length_scale, prior_variance);
  }
  if (kind == "matern") {
    return sbg::KernelSpec::matern(length_scale, nu, prior_variance);
  }
  throw sbg::parameter_error("unknown kernel kind: " + kind);
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw sbg::parameter_error("cannot open for writing: " + path);
  out << text;
}

int run(int argc, char** argv) {
  CLI::App app{"Maximin learning in simulation-based games"};
  app.require_subcommand(1);

  // --- gen-game --------------------------------------------------------------
  auto* gen = app.add_subcommand("gen-game", "Sample a random GP game");
  std::string gen_kernel = "se";
  double gen_l = 0.1, gen_nu = 2.5, gen_sigma2 = 1.0;
  int gen_n = 3, gen_m = 3;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--kernel", gen_kernel, "se | matern");
  gen->add_option("--length-scale", gen_l, "kernel length scale");
  gen->add_option("--nu", gen_nu, "Matern smoothness");
  gen->add_option("--sigma2", gen_sigma2, "prior variance in (0, 1]");
  gen->add_option("--n", gen_n, "first-player strategies");
  gen->add_option("--m", gen_m, "second-player strategies");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "output JSON path (default stdout)");

  // --- solve -----------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "Run one solver on a game file");
  std::string solve_game, solve_alg = "m_gp_lucb", solve_kernel = "se";
  std::string solve_bt = "theorem", solve_out;
  double solve_l = 0.1, solve_nu = 2.5, solve_sigma2 = 1.0;
  double solve_delta = 0.1, solve_eps = 0.0, solve_lambda = 0.1;
  long solve_cap = 30000;
  std::uint64_t solve_seed = 0;
  solve->add_option("--game", solve_game, "game JSON file")->required();
  solve->add_option("--algorithm", solve_alg,
                    "m_gp_lucb | gp_se | m_g_lucb | m_lucb");
  solve->add_option("--kernel", solve_kernel, "se | matern");
  solve->add_option("--length-scale", solve_l, "kernel length scale");
  solve->add_option("--nu", solve_nu, "Matern smoothness");
  solve->add_option("--sigma2", solve_sigma2, "prior variance");
  solve->add_option("--delta", solve_delta, "confidence parameter");
  solve->add_option("--epsilon", solve_eps, "approximation level");
  solve->add_option("--lambda", solve_lambda, "observation noise variance");
  solve->add_option("--round-cap", solve_cap, "round cap / GP-SE budget");
  solve->add_option("--bt", solve_bt, "theorem | corollary");
  solve->add_option("--seed", solve_seed, "simulator seed");
  solve->add_option("--out", solve_out, "query log CSV path");

  // --- bounds ----------------------------------------------------------------
  auto* bounds = app.add_subcommand("bounds", "Hardness terms and bounds");
  std::string bounds_game;
  double bounds_delta = 0.1, bounds_eps = 0.1, bounds_lambda = 0.1;
  double bounds_a = 1.0, bounds_b = 1.0;
  long bounds_budget = 30000;
  std::string bounds_out;
  bounds->add_option("--game", bounds_game, "game JSON file")->required();
  bounds->add_option("--delta", bounds_delta, "confidence parameter");
  bounds->add_option("--eps", bounds_eps, "approximation level");
  bounds->add_option("--lambda", bounds_lambda, "observation noise variance");
  bounds->add_option("--T", bounds_budget, "fixed budget");
  bounds->add_option("--a", bounds_a, "smoothness constant a");
  bounds->add_option("--b", bounds_b, "smoothness constant b");
  bounds->add_option("--out", bounds_out, "output JSON path (default stdout)");

  // --- spitfire ----------------------------------------------------------------
  auto* spit = app.add_subcommand("spitfire",
                                  "Discretization sweep on Hit-the-Spitfire");
  std::vector<int> spit_k = {4, 8, 16};
  double spit_delta = 0.1, spit_lambda = 0.1, spit_a = 1.0, spit_b = 1.0;
  double spit_l = 0.1;
  int spit_runs = 10, spit_ref = 100;
  long spit_cap = 30000;
  std::uint64_t spit_seed = 0;
  std::string spit_out;
  spit->add_option("--k-eps", spit_k, "grid sizes to sweep");
  spit->add_option("--delta", spit_delta, "confidence parameter");
  spit->add_option("--lambda", spit_lambda, "GP model noise variance");
  spit->add_option("--length-scale", spit_l, "solver kernel length scale");
  spit->add_option("--a", spit_a, "smoothness constant a");
  spit->add_option("--b", spit_b, "smoothness constant b");
  spit->add_option("--runs", spit_runs, "runs per grid size");
  spit->add_option("--ref-points", spit_ref, "reference grid size");
  spit->add_option("--round-cap", spit_cap, "round cap per run");
  spit->add_option("--seed", spit_seed, "base seed");
  spit->add_option("--out", spit_out, "CSV output path (default stdout)");

  // --- experiment --------------------------------------------------------------
  auto* exp = app.add_subcommand("experiment", "Batch runner from a config file");
  std::string exp_config, exp_out;
  std::uint64_t exp_seed = 0;
  bool exp_seed_set = false;
  exp->add_option("--config", exp_config, "config file")->required();
  auto* seed_opt = exp->add_option("--seed", exp_seed, "override base_seed");
  exp->add_option("--out", exp_out, "override output prefix");
  exp->callback([&] { exp_seed_set = seed_opt->count() > 0; });

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    const auto spec = make_kernel(gen_kernel, gen_l, gen_nu, gen_sigma2);
    std::vector<double> xs(static_cast<std::size_t>(gen_n));
    std::vector<double> ys(static_cast<std::size_t>(gen_m));
    for (int i = 0; i < gen_n; ++i) xs[static_cast<std::size_t>(i)] = double(i) / (gen_n - 1);
    for (int j = 0; j < gen_m; ++j) ys[static_cast<std::size_t>(j)] = double(j) / (gen_m - 1);
    sbg::ProfileGrid grid(xs, ys);
    sbg::FiniteGame game(grid, sbg::sample_utility(grid, spec, gen_seed));
    const std::string text = sbg::game_to_json(game) + "\n";
    if (gen_out.empty()) {
      std::cout << text;
    } else {
      write_text(gen_out, text);
    }
    return 0;
  }

  if (solve->parsed()) {
    const sbg::FiniteGame game = sbg::load_game(solve_game);
    sbg::TableSimulator sim(game, solve_lambda, solve_seed);
    sbg::LucbOptions options;
    options.delta = solve_delta;
    options.epsilon = solve_eps;
    options.round_cap = solve_cap;
    if (solve_bt == "corollary") {
      options.exploration = sbg::corollary_bt(game.n(), game.m(), solve_delta);
    } else if (solve_bt != "theorem") {
      throw sbg::parameter_error("unknown bt schedule: " + solve_bt);
    }
    const auto spec = make_kernel(solve_kernel, solve_l, solve_nu, solve_sigma2);

    sbg::SolverResult result;
    if (solve_alg == "m_gp_lucb") {
      result = sbg::m_gp_lucb(sim, game.grid, spec, solve_lambda, options);
    } else if (solve_alg == "m_g_lucb") {
      result = sbg::m_g_lucb(sim, game.grid, solve_lambda, solve_sigma2, options);
    } else if (solve_alg == "m_lucb") {
      const double range = game.table.max_value() - game.table.min_value();
      result = sbg::m_lucb(sim, game.grid, range > 0.0 ? range : 1.0, options);
    } else if (solve_alg == "gp_se") {
      result = sbg::gp_se(sim, game.grid, spec, solve_lambda, solve_cap);
    } else {
      throw sbg::parameter_error("unknown algorithm: " + solve_alg);
    }

    if (!solve_out.empty()) {
      std::ostringstream log;
      sbg::write_query_log_csv(result, log);
      write_text(solve_out, log.str());
    }
    nlohmann::json doc;
    doc["x_index"] = result.x_index;
    doc["y_index"] = result.y_index;
    doc["x"] = game.grid.x(result.x_index);
    doc["y"] = game.grid.y(result.y_index);
    doc["rounds_used"] = result.rounds_used;
    doc["terminated"] = result.terminated;
    std::cout << doc.dump() << "\n";
    return 0;
  }

  if (bounds->parsed()) {
    const sbg::FiniteGame game = sbg::load_game(bounds_game);
    const double hs = sbg::h_star(game);
    const double h2 = sbg::h_two(game);
    nlohmann::json doc;
    doc["h_star"] = hs;
    doc["h_one"] = sbg::h_one(game);
    doc["h_two"] = h2;
    try {
      doc["t_delta"] = sbg::t_delta_bound(hs, bounds_lambda, game.n(), game.m(),
                                          bounds_delta);
    } catch (const sbg::parameter_error& e) {
      doc["t_delta"] = nullptr;
      doc["t_delta_error"] = e.what();
    }
    const long profiles = static_cast<long>(game.n()) * game.m();
    doc["delta_T"] = sbg::clamp_confidence(sbg::delta_t(
        bounds_budget, profiles, game.n(), game.m(), bounds_lambda, h2));
    doc["k_eps"] = sbg::k_epsilon(bounds_eps, bounds_delta, bounds_a, bounds_b);
    try {
      doc["delta_T_eps"] = sbg::delta_t_eps(bounds_budget, bounds_eps,
                                            bounds_delta, bounds_a, bounds_b,
                                            bounds_lambda, h2);
    } catch (const sbg::parameter_error& e) {
      doc["delta_T_eps"] = nullptr;
      doc["delta_T_eps_error"] = e.what();
    }
    try {
      const auto opt = sbg::delta_opt(bounds_budget, bounds_eps, bounds_a,
                                      bounds_b, bounds_lambda,
                                      [h2](int) { return h2; });
      doc["delta_opt"] = opt.delta;
      doc["delta_opt_objective"] = opt.objective;
    } catch (const sbg::parameter_error& e) {
      doc["delta_opt"] = nullptr;
      doc["delta_opt_error"] = e.what();
    }
    const std::string text = doc.dump(2) + "\n";
    if (bounds_out.empty()) {
      std::cout << text;
    } else {
      write_text(bounds_out, text);
    }
    return 0;
  }

  if (spit->parsed()) {
    sbg::ExperimentConfig config;
    config.source = "spitfire";
    config.kernel = "se";
    config.length_scale = spit_l;
    config.algorithm = "m_gp_lucb";
    config.bt = "corollary";
    config.delta = spit_delta;
    config.lambda = spit_lambda;
    config.round_cap = spit_cap;
    config.runs = spit_runs;
    config.base_seed = spit_seed;
    config.k_list = spit_k;
    config.ref_points = spit_ref;
    config.smooth_a = spit_a;
    config.smooth_b = spit_b;
    const auto sweep = sbg::eps_sweep(config);
    std::ostringstream csv;
    sbg::write_eps_run_csv(sweep.records, csv);
    if (spit_out.empty()) {
      std::cout << csv.str();
    } else {
      write_text(spit_out, csv.str());
    }
    return 0;
  }

  if (exp->parsed()) {
    sbg::ExperimentConfig config = sbg::load_config(exp_config);
    if (exp_seed_set) config.base_seed = exp_seed;
    if (!exp_out.empty()) config.out = exp_out;
    if (config.out.empty()) config.out = "results/experiment";

    if (!config.k_list.empty()) {
      const auto sweep = sbg::eps_sweep(config);
      std::ostringstream runs_csv, table_csv;
      sbg::write_eps_run_csv(sweep.records, runs_csv);
      sbg::write_eps_csv(sweep.table, table_csv);
      write_text(config.out + ".eps_runs.csv", runs_csv.str());
      write_text(config.out + ".eps.csv", table_csv.str());
      std::cout << table_csv.str();
    } else {
      const auto output = sbg::run_experiment(config);
      sbg::emit(output, config.out);
      std::cout << sbg::summary_to_json(output.summary) << "\n";
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const sbg::parameter_error& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const sbg::numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
