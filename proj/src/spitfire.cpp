#include "sbg/spitfire.hpp"

#include <algorithm>
#include <cmath>

namespace sbg {

void SpitfireParams::validate() const {
  if (!(v_a > v_d) || !(v_d > 0.0)) {
    throw parameter_error("requires missile faster than plane: v_a > v_d > 0");
  }
  if (!(h_perp > h_f) || !(h_f > 0.0)) {
    throw parameter_error("requires h_perp > h_f > 0");
  }
  if (!(ell > 0.0)) throw parameter_error("plane length ell must be positive");
}

double s_max(const SpitfireParams& params) {
  params.validate();
  return params.v_d * params.h_perp / (params.v_a * std::cos(1.0));
}

double damage_at(const SpitfireParams& params, double x) {
  params.validate();
  if (std::abs(x) > params.ell / 2.0 + 1e-12) {
    throw parameter_error("hit point outside the plane");
  }
  const double d = -(4.0 / (params.ell * params.ell)) * x * x + 1.0;
  return std::clamp(d, 0.0, 1.0);
}

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

struct Geometry {
  bool flare_gate = false;
  bool direct_gate = false;
  double hit_probability_raw = 0.0;  // flare branch only
  double direct_offset = 0.0;        // |missile - plane| at plane altitude
};

Geometry evaluate_geometry(const SpitfireParams& p, double theta, double s_d) {
  theta = clamp01(theta);
  s_d = clamp01(s_d);
  Geometry g;

  const double smax = s_max(p);
  const double flare_pos = s_d * smax;
  const double missile_at_flare = (p.h_perp - p.h_f) * std::tan(theta);
  if (flare_pos - p.ell / 4.0 <= missile_at_flare &&
      missile_at_flare <= flare_pos + p.ell / 4.0) {
    g.flare_gate = true;
    // Plane position when the missile crosses flare altitude.
    const double plane_at_flare =
        p.v_d * (p.h_perp - p.h_f) / (p.v_a * std::cos(theta));
    g.hit_probability_raw = 1.0 - std::abs(flare_pos - plane_at_flare) / smax;
    return g;
  }

  const double plane_at_perp = p.v_d * p.h_perp / (p.v_a * std::cos(theta));
  const double missile_at_perp = p.h_perp * std::tan(theta);
  if (plane_at_perp - p.ell / 2.0 <= missile_at_perp &&
      missile_at_perp <= plane_at_perp + p.ell / 2.0) {
    g.direct_gate = true;
    g.direct_offset = std::abs(plane_at_perp - missile_at_perp);
  }
  return g;
}

}  // namespace

double flare_hit_probability_raw(const SpitfireParams& params, double theta,
                                 double s_d) {
  params.validate();
  const double smax = s_max(params);
  const double flare_pos = clamp01(s_d) * smax;
  const double plane_at_flare = params.v_d * (params.h_perp - params.h_f) /
                                (params.v_a * std::cos(clamp01(theta)));
  return 1.0 - std::abs(flare_pos - plane_at_flare) / smax;
}

double flare_hit_probability(const SpitfireParams& params, double theta,
                             double s_d) {
  return clamp01(flare_hit_probability_raw(params, theta, s_d));
}

SpitfireOutcome simulate(const SpitfireParams& params, double theta,
                         double s_d, Rng& rng) {
  params.validate();
  const Geometry g = evaluate_geometry(params, theta, s_d);
  SpitfireOutcome outcome;

  if (g.flare_gate) {
    const double p_hit = clamp01(g.hit_probability_raw);
    if (rng.bernoulli(p_hit)) {
      const double hit = rng.uniform(-params.ell / 2.0, params.ell / 2.0);
      outcome.branch = SpitfireBranch::kFlareHitAnyway;
      outcome.damage = damage_at(params, hit);
      outcome.hit_point = hit;
    } else {
      outcome.branch = SpitfireBranch::kFlareDeflected;
    }
    return outcome;
  }

  if (g.direct_gate) {
    outcome.branch = SpitfireBranch::kDirectHit;
    outcome.damage = damage_at(params, g.direct_offset);
    outcome.hit_point = g.direct_offset;
    return outcome;
  }

  outcome.branch = SpitfireBranch::kMiss;
  return outcome;
}

double expected_damage(const SpitfireParams& params, double theta, double s_d) {
  params.validate();
  const Geometry g = evaluate_geometry(params, theta, s_d);
  if (g.flare_gate) {
    // E[damage(U)] over U ~ Uniform[-ell/2, ell/2] is 2/3.
    return clamp01(g.hit_probability_raw) * (2.0 / 3.0);
  }
  if (g.direct_gate) {
    return damage_at(params, g.direct_offset);
  }
  return 0.0;
}

SpitfireSimulator::SpitfireSimulator(SpitfireParams params, std::uint64_t seed,
                                     double role_sign)
    : params_(params), role_sign_(role_sign), rng_(seed) {
  params_.validate();
  if (role_sign_ != 1.0 && role_sign_ != -1.0) {
    throw parameter_error("role_sign must be +1 or -1");
  }
}

double SpitfireSimulator::sample(const Profile& profile) {
  return role_sign_ * simulate(params_, profile.x, profile.y, rng_).damage;
}

}  // namespace sbg
