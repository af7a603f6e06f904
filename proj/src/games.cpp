#include "sbg/games.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sbg {

FiniteGame::FiniteGame(ProfileGrid g, UtilityTable t)
    : grid(std::move(g)), table(std::move(t)) {
  if (table.n != grid.n() || table.m != grid.m()) {
    throw parameter_error("utility table dimensions do not match the grid");
  }
  for (double v : table.values) {
    if (!std::isfinite(v)) {
      throw parameter_error("utility table entries must be finite");
    }
  }
}

int best_response(const FiniteGame& game, int x_index) {
  if (x_index < 0 || x_index >= game.n()) {
    throw parameter_error("row index out of range");
  }
  int best = 0;
  for (int j = 1; j < game.m(); ++j) {
    if (game.u(x_index, j) < game.u(x_index, best)) best = j;
  }
  return best;
}

MaximinResult brute_force_maximin(const FiniteGame& game) {
  MaximinResult result;
  result.x_index = 0;
  result.y_index = best_response(game, 0);
  result.value = game.u(0, result.y_index);
  for (int i = 1; i < game.n(); ++i) {
    const int j = best_response(game, i);
    const double v = game.u(i, j);
    if (v > result.value) {
      result = MaximinResult{i, j, v};
    }
  }
  return result;
}

std::vector<double> row_values(const FiniteGame& game) {
  std::vector<double> vals(static_cast<std::size_t>(game.n()));
  for (int i = 0; i < game.n(); ++i) {
    vals[static_cast<std::size_t>(i)] = game.u(i, best_response(game, i));
  }
  return vals;
}

bool is_nondegenerate(const FiniteGame& game, double tol) {
  if (game.n() < 2) return false;
  auto vals = row_values(game);
  std::sort(vals.begin(), vals.end(), std::greater<>());
  return vals[0] - vals[1] > tol;
}

int k_epsilon(double eps, double delta, double a, double b) {
  if (!(eps > 0.0)) throw parameter_error("epsilon must be positive");
  if (!(delta > 0.0) || !(delta < 2.0)) {
    throw parameter_error("delta must lie in (0, 2)");
  }
  if (!(a > 0.0) || !(b > 0.0)) {
    throw parameter_error("smoothness constants a, b must be positive");
  }
  if (!(4.0 * a > delta)) {
    throw parameter_error("requires 4a > delta so that log(4a/delta) >= 0");
  }
  const double inner = b / (2.0 * eps) * std::sqrt(std::log(4.0 * a / delta));
  const double k = std::ceil(inner) + 1.0;
  if (k > 1e9) throw numeric_error("K_epsilon overflows practical grid sizes");
  return std::max(2, static_cast<int>(k));
}

FiniteGame discretize(const std::function<double(double, double)>& utility,
                      int points_per_side) {
  ProfileGrid grid = ProfileGrid::uniform(points_per_side);
  UtilityTable table(points_per_side, points_per_side);
  for (int i = 0; i < points_per_side; ++i) {
    for (int j = 0; j < points_per_side; ++j) {
      table.at(i, j) = utility(grid.x(i), grid.y(j));
    }
  }
  return FiniteGame(std::move(grid), std::move(table));
}

namespace {

double covering_radius(std::vector<double> pts) {
  if (pts.empty()) throw parameter_error("strategy list must be nonempty");
  std::sort(pts.begin(), pts.end());
  if (!(pts.front() >= 0.0 && pts.back() <= 1.0)) {
    throw parameter_error("strategies must lie in [0, 1]");
  }
  double radius = std::max(pts.front() - 0.0, 1.0 - pts.back());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    radius = std::max(radius, (pts[i + 1] - pts[i]) / 2.0);
  }
  return radius;
}

}  // namespace

std::pair<double, double> covering_distances(const std::vector<double>& xs,
                                             const std::vector<double>& ys) {
  return {covering_radius(xs), covering_radius(ys)};
}

double arbitrary_discretization_bound(double delta, double a, double b,
                                      double dx_max, double dy_max) {
  if (!(delta > 0.0) || !(delta < 2.0)) {
    throw parameter_error("delta must lie in (0, 2)");
  }
  if (!(a > 0.0) || !(b > 0.0)) {
    throw parameter_error("smoothness constants a, b must be positive");
  }
  if (!(4.0 * a > delta)) {
    throw parameter_error("requires 4a > delta so that log(4a/delta) >= 0");
  }
  if (dx_max < 0.0 || dy_max < 0.0) {
    throw parameter_error("covering distances must be nonnegative");
  }
  return b * std::sqrt(std::log(4.0 * a / delta)) * std::max(dx_max, dy_max);
}

double eps_hat(const Profile& returned, const FiniteGame& reference) {
  const MaximinResult star = brute_force_maximin(reference);
  const int xi = reference.grid.nearest_x(returned.x);
  const int yj = best_response(reference, xi);
  return std::abs(star.value - reference.u(xi, yj));
}

TableSimulator::TableSimulator(FiniteGame game, double lambda,
                               std::uint64_t seed)
    : game_(std::move(game)), lambda_(lambda), noise_sd_(0.0), rng_(seed) {
  if (lambda_ < 0.0) throw parameter_error("noise lambda must be nonnegative");
  noise_sd_ = std::sqrt(lambda_);
}

double TableSimulator::sample(const Profile& profile) {
  const int i = game_.grid.nearest_x(profile.x);
  const int j = game_.grid.nearest_y(profile.y);
  const double u = game_.u(i, j);
  return lambda_ == 0.0 ? u : rng_.normal(u, noise_sd_);
}

std::string game_to_json(const FiniteGame& game) {
  nlohmann::json doc;
  doc["xs"] = game.grid.xs();
  doc["ys"] = game.grid.ys();
  auto& rows = doc["u"] = nlohmann::json::array();
  for (int i = 0; i < game.n(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < game.m(); ++j) row.push_back(game.u(i, j));
    rows.push_back(std::move(row));
  }
  return doc.dump();
}

FiniteGame game_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw parameter_error(std::string("invalid game JSON: ") + e.what());
  }
  if (!doc.contains("xs") || !doc.contains("ys") || !doc.contains("u")) {
    throw parameter_error("game JSON must contain xs, ys and u");
  }
  std::vector<double> xs = doc["xs"].get<std::vector<double>>();
  std::vector<double> ys = doc["ys"].get<std::vector<double>>();
  const auto& rows = doc["u"];
  UtilityTable table(static_cast<int>(xs.size()), static_cast<int>(ys.size()));
  if (rows.size() != xs.size()) {
    throw parameter_error("game JSON: u has the wrong number of rows");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != ys.size()) {
      throw parameter_error("game JSON: u has a row of the wrong length");
    }
    for (std::size_t j = 0; j < ys.size(); ++j) {
      table.at(static_cast<int>(i), static_cast<int>(j)) =
          rows[i][j].get<double>();
    }
  }
  return FiniteGame(ProfileGrid(std::move(xs), std::move(ys)), std::move(table));
}

void save_game(const FiniteGame& game, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw parameter_error("cannot open for writing: " + path);
  out << game_to_json(game) << "\n";
}

FiniteGame load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parameter_error("cannot open game file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return game_from_json(buf.str());
}

}  // namespace sbg
