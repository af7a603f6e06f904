#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "sbg/gp.hpp"

namespace sbg::detail {

// Belief state shared by the LUCB variants; halfwidth() is the
// confidence-interval half-width at exploration level bt.
class LucbBelief {
 public:
  virtual ~LucbBelief() = default;
  virtual double mean(int flat) const = 0;
  virtual double halfwidth(int flat, double bt) const = 0;
  virtual void observe(int flat, double value) = 0;
};

class GpBelief final : public LucbBelief {
 public:
  GpBelief(const ProfileGrid& grid, const KernelSpec& spec, double lambda)
      : posterior_(grid, spec, lambda) {}

  double mean(int flat) const override { return posterior_.mean(flat); }
  double halfwidth(int flat, double bt) const override {
    return std::sqrt(bt) * posterior_.stddev(flat);
  }
  void observe(int flat, double value) override {
    posterior_.update(flat, value);
  }

  const GPPosterior& posterior() const { return posterior_; }

 private:
  GPPosterior posterior_;
};

// Independent Gaussian prior N(0, sigma^2) per profile: posterior mean
// S / (N + lambda / sigma^2), variance lambda / (lambda / sigma^2 + N).
class DiagonalGaussianBelief final : public LucbBelief {
 public:
  DiagonalGaussianBelief(int size, double lambda, double prior_variance)
      : lambda_(lambda),
        ratio_(lambda / prior_variance),
        counts_(static_cast<std::size_t>(size), 0),
        sums_(static_cast<std::size_t>(size), 0.0) {
    if (!(lambda > 0.0)) throw parameter_error("lambda must be positive");
    if (!(prior_variance > 0.0) || prior_variance > 1.0) {
      throw parameter_error("prior variance must lie in (0, 1]");
    }
  }

  double mean(int flat) const override {
    const auto f = static_cast<std::size_t>(flat);
    return sums_[f] / (static_cast<double>(counts_[f]) + ratio_);
  }
  double halfwidth(int flat, double bt) const override {
    const auto f = static_cast<std::size_t>(flat);
    const double var = lambda_ / (ratio_ + static_cast<double>(counts_[f]));
    return std::sqrt(bt * var);
  }
  void observe(int flat, double value) override {
    const auto f = static_cast<std::size_t>(flat);
    counts_[f] += 1;
    sums_[f] += value;
  }

 private:
  double lambda_;
  double ratio_;
  std::vector<long> counts_;
  std::vector<double> sums_;
};

// Sample means with range-scaled Hoeffding intervals; unqueried profiles
// carry an infinite half-width.
class SampleMeanBelief final : public LucbBelief {
 public:
  SampleMeanBelief(int size, double range)
      : range_(range),
        counts_(static_cast<std::size_t>(size), 0),
        sums_(static_cast<std::size_t>(size), 0.0) {
    if (!(range > 0.0)) throw parameter_error("utility range must be positive");
  }

  double mean(int flat) const override {
    const auto f = static_cast<std::size_t>(flat);
    return counts_[f] == 0 ? 0.0 : sums_[f] / static_cast<double>(counts_[f]);
  }
  double halfwidth(int flat, double bt) const override {
    const auto f = static_cast<std::size_t>(flat);
    if (counts_[f] == 0) return std::numeric_limits<double>::infinity();
    return range_ * std::sqrt(bt / (2.0 * static_cast<double>(counts_[f])));
  }
  void observe(int flat, double value) override {
    const auto f = static_cast<std::size_t>(flat);
    counts_[f] += 1;
    sums_[f] += value;
  }

 private:
  double range_;
  std::vector<long> counts_;
  std::vector<double> sums_;
};

}  // namespace sbg::detail
