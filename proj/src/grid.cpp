#include "sbg/grid.hpp"

#include <algorithm>
#include <cmath>

namespace sbg {

ProfileGrid::ProfileGrid(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.empty() || ys_.empty()) {
    throw parameter_error("grid needs at least one strategy per player");
  }
  for (const auto* pts : {&xs_, &ys_}) {
    for (std::size_t i = 0; i < pts->size(); ++i) {
      const double v = (*pts)[i];
      if (!(v >= 0.0 && v <= 1.0)) {
        throw parameter_error("grid coordinates must lie in [0, 1]");
      }
      if (i > 0 && !((*pts)[i - 1] < v)) {
        throw parameter_error("grid coordinates must be strictly increasing");
      }
    }
  }
}

ProfileGrid ProfileGrid::uniform(int points_per_side) {
  if (points_per_side < 2) {
    throw parameter_error("uniform grid needs at least 2 points per side");
  }
  std::vector<double> pts(static_cast<std::size_t>(points_per_side));
  for (int i = 0; i < points_per_side; ++i) {
    pts[static_cast<std::size_t>(i)] =
        static_cast<double>(i) / (points_per_side - 1);
  }
  return ProfileGrid(pts, pts);
}

int ProfileGrid::nearest(const std::vector<double>& pts, double value) {
  int best = 0;
  double best_dist = std::abs(pts[0] - value);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double d = std::abs(pts[i] - value);
    if (d < best_dist) {
      best = static_cast<int>(i);
      best_dist = d;
    }
  }
  return best;
}

double UtilityTable::min_value() const {
  return *std::min_element(values.begin(), values.end());
}

double UtilityTable::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

}  // namespace sbg
