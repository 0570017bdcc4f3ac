#pragma once

// Seeded random tangent-bundle points inside a profile's domain, away from
// the singular loci s = 0, h = 0, h' = 0, h'' = 0 and the domain ends.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cosmofinsler/cosmo_geometry.hpp"
#include "cosmofinsler/errors.hpp"
#include "cosmofinsler/profiles.hpp"
#include "cosmofinsler/rng.hpp"
#include "cosmofinsler/tensors.hpp"

namespace cosmofinsler {

struct SampleSpec {
  std::size_t count = 100;
  std::uint64_t seed = 1;
  double t_min = 0.5, t_max = 2.0;
  /// s is drawn from the domain intervals clipped to [s_min, s_max].
  double s_min = -3.0, s_max = 3.0;
  /// Relative distance kept from the loci s = 0 and h' = 0.
  double margin = 1e-3;
  /// Relative distance kept from the loci where det g degenerates: finite
  /// domain ends (as a fraction of the interval width), h = 0 and h'' = 0.
  double end_margin = 0.02;
  double r_min = 0.4, r_max = 1.2;
  double theta_margin = 0.3;
  /// Keep points on the h'' = 0 and h' = 0 loci (used to detect degenerate profiles).
  bool keep_degenerate = false;
  std::size_t attempts_per_point = 200;
};

namespace detail {

inline bool near_singular_locus(const ProfileJet& j, const SampleSpec& spec) {
  const double s = j.s;
  if (std::abs(s) < spec.margin) return true;
  if (std::abs(j.h) < spec.end_margin * std::abs(s * j.hs1)) return true;
  if (spec.keep_degenerate) return false;
  if (std::abs(s * j.hs1) < spec.margin * std::abs(j.h)) return true;
  return hessian_relative(j) < spec.end_margin;
}

}  // namespace detail

/// Draws `spec.count` points. Returns fewer if the admissible region is too
/// thin to hit within the attempt budget.
inline std::vector<TangentPoint> sample_points(const Profile& profile, const SampleSpec& spec) {
  if (!(spec.t_max >= spec.t_min)) throw ConfigError("sampling: t_max must be >= t_min");
  if (!(spec.margin > 0)) throw ConfigError("sampling: margin must be > 0");
  CounterRng rng(spec.seed, 0x5a4d);
  const double k = profile.k();
  double r_max = spec.r_max;
  if (k > 0) r_max = std::min(r_max, 0.9 / std::sqrt(k));
  const double t_lo = std::max(spec.t_min, profile.t_min() > -1e300 ? spec.margin : spec.t_min);

  std::vector<TangentPoint> out;
  const std::size_t budget = spec.count * spec.attempts_per_point;
  for (std::size_t attempt = 0; attempt < budget && out.size() < spec.count; ++attempt) {
    const double t = rng.uniform(t_lo, std::max(t_lo, spec.t_max));
    std::vector<Interval> ivs;
    double total = 0;
    for (const auto& iv : profile.s_domain(t)) {
      Interval c{std::max(iv.lo, spec.s_min), std::min(iv.hi, spec.s_max)};
      const double pad = std::max(spec.margin, spec.end_margin * c.width());
      if (std::isfinite(iv.lo)) c.lo = std::max(c.lo, iv.lo + pad);
      if (std::isfinite(iv.hi)) c.hi = std::min(c.hi, iv.hi - pad);
      if (c.hi > c.lo) {
        ivs.push_back(c);
        total += c.width();
      }
    }
    const double u = rng.uniform();
    const double spatial[4] = {rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
    const double dir[3] = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (ivs.empty()) continue;

    double pick = u * total, s = ivs.back().hi;
    for (const auto& iv : ivs) {
      if (pick < iv.width()) {
        s = iv.lo + pick;
        break;
      }
      pick -= iv.width();
    }

    TangentPoint p;
    p.x = {t, spec.r_min + (r_max - spec.r_min) * spatial[0],
           spec.theta_margin + (M_PI - 2 * spec.theta_margin) * spatial[1], 2 * M_PI * spatial[2]};
    const double r = p.x[1], st = std::sin(p.x[2]);
    const double w_dir = std::sqrt(dir[0] * dir[0] / (1 - k * r * r) + r * r * (dir[1] * dir[1] + st * st * dir[2] * dir[2]));
    if (w_dir < 1e-3) continue;
    const double w = 0.5 + 1.5 * spatial[3];
    const double f = w / w_dir;
    p.v = {w / s, dir[0] * f, dir[1] * f, dir[2] * f};

    try {
      const ProfileJet j = eval_jet(profile, t, s);
      if (detail::near_singular_locus(j, spec)) continue;
    } catch (const Error&) {
      continue;
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace cosmofinsler
