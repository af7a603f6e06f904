#pragma once

#include "sbg/common.hpp"

namespace sbg {

enum class KernelKind { kSquaredExponential, kMatern };

// Covariance function over strategy profiles.  k(pi, pi) equals the prior
// variance sigma^2, which is 1 unless overridden (must stay in (0, 1]).
struct KernelSpec {
  KernelKind kind = KernelKind::kSquaredExponential;
  double length_scale = 1.0;
  double nu = 2.5;  // Matern smoothness; ignored for squared exponential
  double prior_variance = 1.0;

  static KernelSpec squared_exponential(double length_scale,
                                        double prior_variance = 1.0) {
    return KernelSpec{KernelKind::kSquaredExponential, length_scale, 0.0,
                      prior_variance};
  }

  static KernelSpec matern(double length_scale, double nu,
                           double prior_variance = 1.0) {
    return KernelSpec{KernelKind::kMatern, length_scale, nu, prior_variance};
  }

  void validate() const;
};

// Covariance between two profiles; distance is Euclidean on [0,1]^2.
double kernel_eval(const KernelSpec& spec, const Profile& a, const Profile& b);

// One-dimensional kernel value at distance r >= 0 (both profile coordinates
// enter through the Euclidean norm only).
double kernel_eval_distance(const KernelSpec& spec, double r);

}  // namespace sbg
