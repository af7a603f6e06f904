#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "sbg/common.hpp"

namespace sbg {

// Deterministic RNG used throughout: a mt19937_64 source with hand-rolled
// transforms so that streams are reproducible across standard libraries
// (std::normal_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via the polar Box-Muller method; the second value of
  // each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double v1 = 0.0, v2 = 0.0, rsq = 0.0;
    do {
      v1 = 2.0 * uniform() - 1.0;
      v2 = 2.0 * uniform() - 1.0;
      rsq = v1 * v1 + v2 * v2;
    } while (rsq >= 1.0 || rsq < 1e-300);
    const double fac = std::sqrt(-2.0 * std::log(rsq) / rsq);
    spare_ = v1 * fac;
    has_spare_ = true;
    return v2 * fac;
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// splitmix64 finalizer; mixes one word into a stream key.
inline std::uint64_t mix_seed(std::uint64_t state, std::uint64_t word) {
  std::uint64_t z = state + 0x9e3779b97f4a7c15ULL + word;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic per-run seed: hash(base_seed, instance_id, run_id).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t instance,
                                 std::uint64_t run) {
  return mix_seed(mix_seed(mix_seed(0x243f6a8885a308d3ULL, base), instance), run);
}

}  // namespace sbg
