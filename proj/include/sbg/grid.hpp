#pragma once

#include <utility>
#include <vector>

#include "sbg/common.hpp"

namespace sbg {

// Finite strategy grid: ordered first-player strategies xs and second-player
// strategies ys, both inside [0, 1].  Profiles are addressed either by the
// index pair (i, j) or by the row-major flat index i * m + j.
class ProfileGrid {
 public:
  ProfileGrid(std::vector<double> xs, std::vector<double> ys);

  // K equally spaced points per side over [0, 1], endpoints included.
  static ProfileGrid uniform(int points_per_side);

  int n() const { return static_cast<int>(xs_.size()); }
  int m() const { return static_cast<int>(ys_.size()); }
  int size() const { return n() * m(); }

  int flat(int i, int j) const { return i * m() + j; }
  std::pair<int, int> unflat(int f) const { return {f / m(), f % m()}; }

  double x(int i) const { return xs_[static_cast<std::size_t>(i)]; }
  double y(int j) const { return ys_[static_cast<std::size_t>(j)]; }
  Profile profile(int i, int j) const { return Profile{x(i), y(j)}; }
  Profile profile_flat(int f) const {
    auto [i, j] = unflat(f);
    return profile(i, j);
  }

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }

  // Nearest grid coordinate; lowest index on exact ties.
  int nearest_x(double value) const { return nearest(xs_, value); }
  int nearest_y(double value) const { return nearest(ys_, value); }

 private:
  static int nearest(const std::vector<double>& pts, double value);

  std::vector<double> xs_;
  std::vector<double> ys_;
};

// Dense n x m table of first-player utilities, row-major.
struct UtilityTable {
  UtilityTable() = default;
  UtilityTable(int n, int m, double fill = 0.0)
      : n(n), m(m), values(static_cast<std::size_t>(n) * m, fill) {}

  int n = 0;
  int m = 0;
  std::vector<double> values;

  double& at(int i, int j) { return values[static_cast<std::size_t>(i) * m + j]; }
  double at(int i, int j) const {
    return values[static_cast<std::size_t>(i) * m + j];
  }

  double min_value() const;
  double max_value() const;
};

}  // namespace sbg
