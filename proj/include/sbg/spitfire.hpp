#pragma once

#include <optional>

#include "sbg/games.hpp"
#include "sbg/rng.hpp"

namespace sbg {

// Physical constants of the missile-versus-airplane security game.
// Defaults are the experiment values.
struct SpitfireParams {
  double h_perp = 100.0;  // detection distance (m)
  double h_f = 10.0;      // flare standoff from the plane (m)
  double v_a = 500.0;     // missile speed (m/s)
  double v_d = 120.0;     // airplane speed (m/s)
  double ell = 15.0;      // airplane length (m)

  void validate() const;
};

enum class SpitfireBranch {
  kFlareDeflected,
  kFlareHitAnyway,
  kDirectHit,
  kMiss,
};

struct SpitfireOutcome {
  SpitfireBranch branch = SpitfireBranch::kMiss;
  double damage = 0.0;                // in [0, 1]; 0 for Deflected and Miss
  std::optional<double> hit_point;    // meters from the plane center
};

// Farthest point from detection at which the missile can still reach the
// plane: v_d h_perp / (v_a cos 1).
double s_max(const SpitfireParams& params);

// Parabolic damage profile -(4 / ell^2) x^2 + 1; requires |x| <= ell / 2.
double damage_at(const SpitfireParams& params, double x);

// Bernoulli mean of the missile surviving the flare, before clamping into
// [0, 1]: 1 - |s_d s_max - x_d| / s_max with x_d the plane position when the
// missile crosses flare altitude.
double flare_hit_probability_raw(const SpitfireParams& params, double theta,
                                 double s_d);
double flare_hit_probability(const SpitfireParams& params, double theta,
                             double s_d);

// One game interaction: flare interception gate first, then the Bernoulli
// deflection draw with a uniform hit point on a hit; otherwise the direct
// interception gate with a deterministic hit point.  Inputs are clamped
// into [0, 1].
SpitfireOutcome simulate(const SpitfireParams& params, double theta,
                         double s_d, Rng& rng);

// Analytic expectation of simulate's damage: p_hit * 2/3 on the flare
// branch (uniform hit point), the deterministic damage on a direct hit,
// zero on a miss.
double expected_damage(const SpitfireParams& params, double theta, double s_d);

// Simulator adapter over [0,1]^2: x = theta, y = s_d, utility = one damage
// draw (times role_sign).  The game's intrinsic randomness is the
// observation noise.
class SpitfireSimulator : public Simulator {
 public:
  SpitfireSimulator(SpitfireParams params, std::uint64_t seed,
                    double role_sign = 1.0);

  const SpitfireParams& params() const { return params_; }

 protected:
  double sample(const Profile& profile) override;

 private:
  SpitfireParams params_;
  double role_sign_;
  Rng rng_;
};

}  // namespace sbg
