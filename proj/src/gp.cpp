#include "sbg/gp.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "sbg/rng.hpp"

namespace sbg {

GPPosterior::GPPosterior(ProfileGrid grid, KernelSpec spec, double lambda)
    : grid_(std::move(grid)), spec_(spec), lambda_(lambda) {
  spec_.validate();
  if (!(lambda_ > 0.0)) {
    throw parameter_error("posterior noise lambda must be positive");
  }
  const int size = grid_.size();
  mean_ = Eigen::VectorXd::Zero(size);
  cov_ = kernel_matrix(grid_, spec_);
  counts_.assign(static_cast<std::size_t>(size), 0);
  sums_.assign(static_cast<std::size_t>(size), 0.0);
}

void GPPosterior::update(int flat_index, double value) {
  const double denom = lambda_ + variance(flat_index);
  const Eigen::VectorXd kcol = cov_.col(flat_index);
  mean_ += kcol * ((value - mean_(flat_index)) / denom);
  cov_.noalias() -= (kcol * kcol.transpose()) / denom;
  counts_[static_cast<std::size_t>(flat_index)] += 1;
  sums_[static_cast<std::size_t>(flat_index)] += value;
  rounds_ += 1;
}

namespace {

// Shared solve for the batch and aggregated posterior forms.  `noise` holds
// the per-row diagonal noise: lambda for raw observations, lambda / N for
// aggregated ones.
struct PosteriorSolve {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

PosteriorSolve solve_from_support(const ProfileGrid& grid,
                                  const KernelSpec& spec,
                                  const std::vector<int>& support,
                                  const Eigen::VectorXd& noise,
                                  const Eigen::VectorXd& targets) {
  const int d = static_cast<int>(support.size());
  const int size = grid.size();

  Eigen::MatrixXd system(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b <= a; ++b) {
      const double v = kernel_eval(spec, grid.profile_flat(support[a]),
                                   grid.profile_flat(support[b]));
      system(a, b) = v;
      system(b, a) = v;
    }
    system(a, a) += noise(a);
  }

  // Cross covariance between every grid profile and the support.
  Eigen::MatrixXd cross(size, d);
  for (int f = 0; f < size; ++f) {
    for (int a = 0; a < d; ++a) {
      cross(f, a) = kernel_eval(spec, grid.profile_flat(f),
                                grid.profile_flat(support[a]));
    }
  }

  Eigen::LLT<Eigen::MatrixXd> llt(system);
  double jitter = 1e-9;
  while (llt.info() != Eigen::Success) {
    if (jitter > 1e-6) {
      throw numeric_error("posterior solve failed beyond maximum jitter");
    }
    Eigen::MatrixXd bumped = system;
    bumped.diagonal().array() += jitter;
    llt.compute(bumped);
    jitter *= 10.0;
  }

  PosteriorSolve out;
  out.mean = cross * llt.solve(targets);
  out.cov = kernel_matrix(grid, spec);
  out.cov.noalias() -= cross * llt.solve(cross.transpose());
  return out;
}

}  // namespace

GPPosterior GPPosterior::from_history(const ProfileGrid& grid,
                                      const KernelSpec& spec, double lambda,
                                      std::span<const Observation> history) {
  GPPosterior post(grid, spec, lambda);
  if (history.empty()) return post;

  const int t = static_cast<int>(history.size());
  std::vector<int> support(static_cast<std::size_t>(t));
  Eigen::VectorXd targets(t);
  for (int s = 0; s < t; ++s) {
    const auto& obs = history[static_cast<std::size_t>(s)];
    if (obs.x_index < 0 || obs.x_index >= grid.n() || obs.y_index < 0 ||
        obs.y_index >= grid.m()) {
      throw parameter_error("observation index outside the grid");
    }
    support[static_cast<std::size_t>(s)] = grid.flat(obs.x_index, obs.y_index);
    targets(s) = obs.value;
  }

  auto solved = solve_from_support(grid, spec, support,
                                   Eigen::VectorXd::Constant(t, lambda), targets);
  post.mean_ = std::move(solved.mean);
  post.cov_ = std::move(solved.cov);
  for (const auto& obs : history) {
    const int f = grid.flat(obs.x_index, obs.y_index);
    post.counts_[static_cast<std::size_t>(f)] += 1;
    post.sums_[static_cast<std::size_t>(f)] += obs.value;
  }
  post.rounds_ = t;
  return post;
}

GPPosterior GPPosterior::from_aggregates(const ProfileGrid& grid,
                                         const KernelSpec& spec, double lambda,
                                         const std::vector<long>& counts,
                                         const std::vector<double>& means) {
  if (counts.size() != static_cast<std::size_t>(grid.size()) ||
      means.size() != counts.size()) {
    throw parameter_error("aggregate vectors must cover the whole grid");
  }
  GPPosterior post(grid, spec, lambda);

  std::vector<int> support;
  for (int f = 0; f < grid.size(); ++f) {
    const long c = counts[static_cast<std::size_t>(f)];
    if (c < 0) throw parameter_error("negative observation count");
    if (c > 0) support.push_back(f);
  }
  if (support.empty()) return post;

  const int d = static_cast<int>(support.size());
  Eigen::VectorXd noise(d), targets(d);
  for (int a = 0; a < d; ++a) {
    const long c = counts[static_cast<std::size_t>(support[a])];
    noise(a) = lambda / static_cast<double>(c);
    targets(a) = means[static_cast<std::size_t>(support[a])];
  }

  auto solved = solve_from_support(grid, spec, support, noise, targets);
  post.mean_ = std::move(solved.mean);
  post.cov_ = std::move(solved.cov);
  for (int f = 0; f < grid.size(); ++f) {
    const long c = counts[static_cast<std::size_t>(f)];
    post.counts_[static_cast<std::size_t>(f)] = c;
    post.sums_[static_cast<std::size_t>(f)] =
        means[static_cast<std::size_t>(f)] * static_cast<double>(c);
    post.rounds_ += c;
  }
  return post;
}

double variance_bound(long n_queries, double lambda, double sigma2) {
  if (n_queries < 0) throw parameter_error("query count must be nonnegative");
  if (!(lambda > 0.0)) throw parameter_error("lambda must be positive");
  if (!(sigma2 > 0.0) || sigma2 > 1.0) {
    throw parameter_error("sigma2 must lie in (0, 1]");
  }
  return lambda / (lambda / sigma2 + static_cast<double>(n_queries));
}

Eigen::MatrixXd kernel_matrix(const ProfileGrid& grid, const KernelSpec& spec) {
  const int size = grid.size();
  Eigen::MatrixXd k(size, size);
  for (int a = 0; a < size; ++a) {
    const Profile pa = grid.profile_flat(a);
    for (int b = 0; b <= a; ++b) {
      const double v = kernel_eval(spec, pa, grid.profile_flat(b));
      k(a, b) = v;
      k(b, a) = v;
    }
  }
  return k;
}

Eigen::MatrixXd cholesky_with_jitter(Eigen::MatrixXd matrix) {
  double jitter = 1e-9;
  matrix.diagonal().array() += jitter;
  while (true) {
    Eigen::LLT<Eigen::MatrixXd> llt(matrix);
    if (llt.info() == Eigen::Success) {
      return llt.matrixL();
    }
    if (jitter >= 1e-6) {
      throw numeric_error("Cholesky factorization failed at maximum jitter");
    }
    matrix.diagonal().array() += 9.0 * jitter;  // escalate x10 total
    jitter *= 10.0;
  }
}

namespace {

Eigen::MatrixXd axis_kernel(const std::vector<double>& pts,
                            const KernelSpec& spec) {
  const int k = static_cast<int>(pts.size());
  Eigen::MatrixXd m(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b <= a; ++b) {
      const double v = kernel_eval_distance(
          spec, std::abs(pts[static_cast<std::size_t>(a)] -
                         pts[static_cast<std::size_t>(b)]));
      m(a, b) = v;
      m(b, a) = v;
    }
  }
  return m;
}

}  // namespace

UtilityTable sample_utility(const ProfileGrid& grid, const KernelSpec& spec,
                            std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  const int n = grid.n();
  const int m = grid.m();
  UtilityTable table(n, m);

  if (spec.kind == KernelKind::kSquaredExponential) {
    // K = sigma^2 * Kx (x) Ky, so L = sigma * Lx (x) Ly and the draw is
    // sigma * Lx Z Ly^T with Z an n x m standard-normal matrix.
    KernelSpec axis = spec;
    axis.prior_variance = 1.0;
    const Eigen::MatrixXd lx = cholesky_with_jitter(axis_kernel(grid.xs(), axis));
    const Eigen::MatrixXd ly = cholesky_with_jitter(axis_kernel(grid.ys(), axis));
    Eigen::MatrixXd z(n, m);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) z(i, j) = rng.normal();
    }
    const Eigen::MatrixXd draw =
        std::sqrt(spec.prior_variance) * lx * z * ly.transpose();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) table.at(i, j) = draw(i, j);
    }
    return table;
  }

  const Eigen::MatrixXd l = cholesky_with_jitter(kernel_matrix(grid, spec));
  Eigen::VectorXd z(grid.size());
  for (int f = 0; f < grid.size(); ++f) z(f) = rng.normal();
  const Eigen::VectorXd draw = l * z;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) table.at(i, j) = draw(grid.flat(i, j));
  }
  return table;
}

}  // namespace sbg
