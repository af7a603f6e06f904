#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "sbg/grid.hpp"
#include "sbg/kernels.hpp"

namespace sbg {

// One simulator observation attributed to a grid profile.
struct Observation {
  int x_index = 0;
  int y_index = 0;
  double value = 0.0;
};

// Gaussian-process belief over the utility values of a finite profile grid.
//
// Three construction routes are provided and agree numerically:
//  - the prior plus repeated recursive rank-one updates,
//  - the batch solve over the raw observation history (reference oracle),
//  - the aggregated solve over distinct profiles with per-profile noise
//    lambda / N and averaged observations (production path for long runs).
class GPPosterior {
 public:
  // Prior: mean 0, covariance k(., .).
  GPPosterior(ProfileGrid grid, KernelSpec spec, double lambda);

  // Batch posterior from a raw history, solving (K_t + lambda I).
  static GPPosterior from_history(const ProfileGrid& grid,
                                  const KernelSpec& spec, double lambda,
                                  std::span<const Observation> history);

  // Aggregated posterior from per-profile counts and means (flat-indexed;
  // count 0 entries are skipped).  Identical to from_history on the
  // equivalent expanded history.
  static GPPosterior from_aggregates(const ProfileGrid& grid,
                                     const KernelSpec& spec, double lambda,
                                     const std::vector<long>& counts,
                                     const std::vector<double>& means);

  // One recursive update step with an observation at a grid profile.
  void update(int flat_index, double value);
  void update(const Observation& obs) {
    update(grid_.flat(obs.x_index, obs.y_index), obs.value);
  }

  double mean(int flat_index) const { return mean_(flat_index); }
  double mean(int i, int j) const { return mean_(grid_.flat(i, j)); }
  double variance(int flat_index) const {
    const double v = cov_(flat_index, flat_index);
    return v > 0.0 ? v : 0.0;
  }
  double variance(int i, int j) const { return variance(grid_.flat(i, j)); }
  double stddev(int flat_index) const { return std::sqrt(variance(flat_index)); }
  double covariance(int a, int b) const { return cov_(a, b); }

  long count(int flat_index) const { return counts_[static_cast<std::size_t>(flat_index)]; }
  double observation_sum(int flat_index) const {
    return sums_[static_cast<std::size_t>(flat_index)];
  }
  long rounds() const { return rounds_; }
  double lambda() const { return lambda_; }
  double prior_variance() const { return spec_.prior_variance; }
  const ProfileGrid& grid() const { return grid_; }
  const KernelSpec& kernel() const { return spec_; }

 private:
  ProfileGrid grid_;
  KernelSpec spec_;
  double lambda_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  std::vector<long> counts_;
  std::vector<double> sums_;
  long rounds_ = 0;
};

// Posterior-variance upper bound lambda / (lambda / sigma^2 + N).
double variance_bound(long n_queries, double lambda, double sigma2);

// Prior covariance matrix over all grid profiles (row-major flat order).
Eigen::MatrixXd kernel_matrix(const ProfileGrid& grid, const KernelSpec& spec);

// Cholesky with escalating diagonal jitter 1e-9 .. 1e-6; throws
// numeric_error once the ladder is exhausted.
Eigen::MatrixXd cholesky_with_jitter(Eigen::MatrixXd matrix);

// Draw a utility table from GP(0, k) over the grid; deterministic in seed.
// Squared-exponential kernels factor over the two axes and use the
// Kronecker square root; other kernels use the dense factorization.
UtilityTable sample_utility(const ProfileGrid& grid, const KernelSpec& spec,
                            std::uint64_t seed);

}  // namespace sbg
