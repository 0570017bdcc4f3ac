#pragma once

// Geodesics xddot^a + 2 G^a(x, xdot) = 0 with an adaptive Dormand-Prince 5(4)
// stepper, conservation monitoring of L and proper time as a passive quadrature.

#include <array>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "cosmofinsler/cosmo_geometry.hpp"
#include "cosmofinsler/errors.hpp"
#include "cosmofinsler/oracle.hpp"
#include "cosmofinsler/profiles.hpp"
#include "cosmofinsler/spacetime.hpp"
#include "cosmofinsler/tensors.hpp"

namespace cosmofinsler {

enum class SpraySource { automatic, closed_form, oracle, specialized };

inline const char* spray_source_name(SpraySource s) {
  switch (s) {
    case SpraySource::automatic: return "auto";
    case SpraySource::closed_form: return "closed";
    case SpraySource::oracle: return "oracle";
    case SpraySource::specialized: return "specialized";
  }
  return "";
}

inline SpraySource spray_source_from_name(const std::string& n) {
  for (auto s : {SpraySource::automatic, SpraySource::closed_form, SpraySource::oracle, SpraySource::specialized})
    if (n == spray_source_name(s)) return s;
  throw ConfigError("unknown spray source '" + n + "' (expected auto, closed, oracle or specialized)");
}

using SprayFunction = std::function<Vec4(const TangentPoint&)>;

/// Spray of `profile` from the requested source. `automatic` prefers the
/// cone-regular specialized form where one exists and the closed form otherwise.
inline SprayFunction make_spray(const Profile& profile, SpraySource source = SpraySource::automatic) {
  if (source == SpraySource::automatic) {
    TangentPoint probe;
    probe.x = {1.0, 0.5, 1.2, 0.3};
    probe.v = {1.0, 0.0, 0.0, 0.0};
    source = specialized_spray(profile, probe) ? SpraySource::specialized : SpraySource::closed_form;
  }
  switch (source) {
    case SpraySource::specialized:
      return [profile](const TangentPoint& p) {
        const auto G = specialized_spray(profile, p);
        if (!G) throw ConfigError(std::string(profile.name()) + ": no specialized spray for this profile");
        return *G;
      };
    case SpraySource::oracle: {
      auto lag = lagrangian_from_profile(profile);
      return [lag](const TangentPoint& p) {
        OracleRequest req;
        req.landsberg = req.curvature = false;
        return oracle_eval(lag, p, req).G;
      };
    }
    default:
      return [profile](const TangentPoint& p) { return geometry_eval(profile, p, Level::spray).G; };
  }
}

/// L = tdot^2 h^2, written through the null function where it extends
/// continuously (with sign) across the light cone.
inline double lagrangian_value(const Profile& profile, const Vec4& x, const Vec4& v) {
  const SpatialPoint sp{x[1], x[2], x[3], profile.k()};
  const double w = spatial_eval(sp, {v[1], v[2], v[3]}, false).w;
  switch (profile.family()) {
    case Family::flrw:
    case Family::unicorn_flrw:
    case Family::unicorn_l2:
    case Family::branch4:
      if (v[0] == 0.0) break;
      return v[0] * v[0] * profile.null_function(x[0], w / v[0]);
    default:
      break;
  }
  if (v[0] == 0.0) throw DomainError("tdot = 0: s = w / tdot undefined");
  const double h = profile.h(x[0], w / v[0]);
  return v[0] * v[0] * h * h;
}

struct GeodesicState {
  double lambda = 0;
  Vec4 x{}, v{};
  double L = 0;
  double tau = 0;
};

enum class GeodesicStatus { completed, singular_approach, step_limit };

inline const char* geodesic_status_name(GeodesicStatus s) {
  switch (s) {
    case GeodesicStatus::completed: return "completed";
    case GeodesicStatus::singular_approach: return "singular_approach";
    case GeodesicStatus::step_limit: return "step_limit";
  }
  return "";
}

struct GeodesicOptions {
  double rel_tol = 1e-10;
  /// Absolute tolerance; a non-positive value means rel_tol * 1e-2.
  double abs_tol = 0;
  double max_step = 0.1;
  double initial_step = 1e-3;
  double min_step = 1e-13;
  std::size_t max_steps = 2000000;
  SpraySource source = SpraySource::automatic;
};

struct Trajectory {
  std::vector<GeodesicState> states;
  GeodesicStatus status = GeodesicStatus::completed;
  /// Error raised by the spray or the Lagrangian when the run stopped early.
  std::string locus;
  double L0 = 0;
  /// max |L - L0| / scale, where scale is |L0| for non-null data and tdot0^2 otherwise.
  double max_L_drift = 0;
  std::size_t accepted = 0, rejected = 0;
};

/// Integrates from (x0, v0) over lambda in [0, span].
inline Trajectory integrate_geodesic(const Profile& profile, const Vec4& x0, const Vec4& v0, double span,
                                     const GeodesicOptions& opt = {}) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 9>;
  if (!(span > 0)) throw ConfigError("geodesic: span must be > 0");
  if (!(opt.rel_tol > 0) || !(opt.max_step > 0)) throw ConfigError("geodesic: tolerances and max_step must be > 0");

  const auto spray = make_spray(profile, opt.source);
  auto L_of = [&](const State& y) {
    return lagrangian_value(profile, {y[0], y[1], y[2], y[3]}, {y[4], y[5], y[6], y[7]});
  };
  auto rhs = [&](const State& y, State& dy, double) {
    TangentPoint p;
    p.x = {y[0], y[1], y[2], y[3]};
    p.v = {y[4], y[5], y[6], y[7]};
    const Vec4 G = spray(p);
    for (int a = 0; a < 4; ++a) {
      dy[a] = y[4 + a];
      dy[4 + a] = -2.0 * G[a];
    }
    dy[8] = std::sqrt(std::abs(L_of(y)));
  };

  Trajectory traj;
  State y{x0[0], x0[1], x0[2], x0[3], v0[0], v0[1], v0[2], v0[3], 0.0};
  {
    State dy;
    try {
      rhs(y, dy, 0.0);
    } catch (const Error& e) {
      throw DomainError(std::string("geodesic: initial data invalid: ") + e.what());
    }
  }
  traj.L0 = L_of(y);
  const double L_scale = std::abs(traj.L0) > 1e-8 * v0[0] * v0[0] ? std::abs(traj.L0) : v0[0] * v0[0];
  auto record = [&](double lambda) {
    GeodesicState s;
    s.lambda = lambda;
    s.x = {y[0], y[1], y[2], y[3]};
    s.v = {y[4], y[5], y[6], y[7]};
    s.L = L_of(y);
    s.tau = y[8];
    if (L_scale > 0) traj.max_L_drift = std::max(traj.max_L_drift, std::abs(s.L - traj.L0) / L_scale);
    traj.states.push_back(s);
  };
  record(0.0);

  const double abs_tol = opt.abs_tol > 0 ? opt.abs_tol : opt.rel_tol * 1e-2;
  auto stepper = ode::make_controlled(abs_tol, opt.rel_tol, opt.max_step, ode::runge_kutta_dopri5<State>());
  double lambda = 0, dt = std::min(opt.initial_step, opt.max_step);
  while (lambda < span) {
    if (traj.accepted + traj.rejected >= opt.max_steps) {
      traj.status = GeodesicStatus::step_limit;
      break;
    }
    dt = std::min(dt, span - lambda);
    ode::controlled_step_result res;
    try {
      res = stepper.try_step(rhs, y, lambda, dt);
    } catch (const Error& e) {
      stepper.reset();
      traj.locus = e.what();
      res = ode::fail;
      dt *= 0.5;
    }
    if (res == ode::success) {
      ++traj.accepted;
      try {
        record(lambda);
      } catch (const Error& e) {
        traj.locus = e.what();
        traj.status = GeodesicStatus::singular_approach;
        break;
      }
      traj.locus.clear();
    } else {
      ++traj.rejected;
      if (dt < opt.min_step) {
        traj.status = GeodesicStatus::singular_approach;
        if (traj.locus.empty()) traj.locus = "step size underflow";
        break;
      }
    }
  }
  return traj;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "lambda,t,r,theta,phi,tdot,rdot,thetadot,phidot,L,tau\n";
  os.precision(17);
  for (const auto& s : traj.states) {
    os << s.lambda;
    for (double c : s.x) os << ',' << c;
    for (double c : s.v) os << ',' << c;
    os << ',' << s.L << ',' << s.tau << '\n';
  }
}

}  // namespace cosmofinsler
