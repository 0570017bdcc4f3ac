#pragma once

// Causal structure: null directions, determinant and signature scans, cone
// asymmetry and convexity, and sprays written directly in cone-regular form.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/roots.hpp>

#include "cosmofinsler/cosmo_geometry.hpp"
#include "cosmofinsler/errors.hpp"
#include "cosmofinsler/oracle.hpp"
#include "cosmofinsler/profiles.hpp"
#include "cosmofinsler/rng.hpp"
#include "cosmofinsler/spatial.hpp"
#include "cosmofinsler/tensors.hpp"

namespace cosmofinsler {

struct SignatureSample {
  double s = 0;
  double det_g_factored = 0;
  double det_g_direct = 0;
  int positive = 0, negative = 0;
  std::string pattern;  // e.g. "(+,-,-,-)"
  bool lorentzian() const { return positive == 1 && negative == 3; }
};

struct ConvexityReport {
  std::size_t checks = 0;
  std::size_t violations = 0;
  /// Smallest (F(u+v) - F(u) - F(v)) / (F(u) + F(v)) seen; non-negative for a convex cone.
  double worst_margin = std::numeric_limits<double>::infinity();
  bool L_positive_inside = true;
};

struct ConeReport {
  double t = 0;
  std::vector<double> null_roots;
  /// Closed-form roots, for families where they are known.
  std::vector<double> closed_form_roots;
  std::vector<std::string> warnings;

  std::vector<SignatureSample> samples;
  std::vector<Interval> lorentzian;
  bool det_negative_everywhere = false;
  bool det_positive_everywhere = false;

  /// | |s_future| - |s_past| | for the roots nearest s = 0 on each side.
  std::optional<double> asymmetry;
  ConvexityReport convexity;
};

struct RootScan {
  double s_lo = -10.0, s_hi = 10.0;
  std::size_t brackets = 10000;
  double tolerance = 1e-12;
};

/// Base point and spatial direction used to turn a value of s into a tangent vector.
struct ConeProbe {
  double r = 0.5;
  double theta = 1.2;
  double phi = 0.3;
  Vec3 direction{0.6, 0.5, 0.4};
  /// Samples with |s| below this are skipped (w = 0 is excluded).
  double s_margin = 1e-6;
};

namespace detail {

inline double pattern_threshold(const Eigen::Vector4d& ev) { return 1e-12 * ev.cwiseAbs().maxCoeff(); }

inline std::string sign_pattern(int pos, int neg, int zero) {
  std::string out = "(";
  auto put = [&](char c, int n) {
    for (int i = 0; i < n; ++i) {
      if (out.size() > 1) out += ',';
      out += c;
    }
  };
  put('+', pos);
  put('-', neg);
  put('0', zero);
  return out + ")";
}

}  // namespace detail

/// Tangent vector at the probe's base point with s = w / tdot and w = 1.
inline TangentPoint cone_vector(const Profile& profile, double t, double s, const ConeProbe& probe = {}) {
  TangentPoint p;
  p.x = {t, probe.r, probe.theta, probe.phi};
  const double k = profile.k();
  if (k > 0 && probe.r * probe.r * k >= 1) throw DomainError("probe radius outside the spatial chart");
  const auto& d = probe.direction;
  const double st = std::sin(probe.theta);
  const double n = std::sqrt(d[0] * d[0] / (1 - k * probe.r * probe.r) + probe.r * probe.r * (d[1] * d[1] + st * st * d[2] * d[2]));
  p.v = {1.0 / s, d[0] / n, d[1] / n, d[2] / n};
  return p;
}

/// Roots of the null function h(t, .) = 0 on the scan interval by sign-change
/// bracketing and bisection. Sign changes through poles are discarded.
inline ConeReport null_directions(const Profile& profile, double t, const RootScan& scan = {}) {
  if (!(scan.s_hi > scan.s_lo) || scan.brackets == 0) throw ConfigError("root scan: need s_hi > s_lo and at least one bracket");
  ConeReport rep;
  rep.t = t;
  rep.closed_form_roots = profile.closed_form_roots(t);
  auto f = [&](double s) { return profile.null_function(t, s); };

  const double ds = (scan.s_hi - scan.s_lo) / static_cast<double>(scan.brackets);
  std::vector<double> grid(scan.brackets + 1), val(scan.brackets + 1);
  for (std::size_t i = 0; i <= scan.brackets; ++i) {
    grid[i] = scan.s_lo + ds * static_cast<double>(i);
    val[i] = f(grid[i]);
  }
  auto add_root = [&](double r) {
    for (double x : rep.null_roots)
      if (std::abs(x - r) < 10 * scan.tolerance) return;
    rep.null_roots.push_back(r);
  };
  const auto done = [&](double lo, double hi) { return std::abs(hi - lo) < scan.tolerance; };
  for (std::size_t i = 0; i + 1 <= scan.brackets; ++i) {
    const double fa = val[i], fb = val[i + 1];
    if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
    // A zero on a grid node counts only if the function changes sign across it.
    if (fa == 0.0 && i > 0 && std::isfinite(val[i - 1]) && val[i - 1] * fb < 0) add_root(grid[i]);
    if (fa * fb < 0) {
      boost::uintmax_t iters = 200;
      const auto [lo, hi] = boost::math::tools::bisect(f, grid[i], grid[i + 1], done, iters);
      const double near = std::min(std::abs(f(lo)), std::abs(f(hi)));
      if (near <= std::max(std::abs(fa), std::abs(fb))) add_root(0.5 * (lo + hi));
    }
  }
  std::sort(rep.null_roots.begin(), rep.null_roots.end());
  if (rep.null_roots.empty()) rep.warnings.push_back("no null directions");

  double future = std::numeric_limits<double>::infinity(), past = -future;
  for (double r : rep.null_roots) {
    if (r > 0) future = std::min(future, r);
    if (r < 0) past = std::max(past, r);
  }
  if (std::isfinite(future) && std::isfinite(past)) rep.asymmetry = std::abs(future + past);
  return rep;
}

/// Determinant (factored and direct) and eigenvalue sign pattern of g at n
/// points of the open interval. Throws ConsistencyError if the two
/// determinants disagree beyond 1e-8 relative.
inline ConeReport signature_scan(const Profile& profile, double t, Interval iv, std::size_t n, const ConeProbe& probe = {}) {
  if (!(iv.hi > iv.lo) || n == 0) throw ConfigError("signature scan: need a nonempty interval and n > 0");
  ConeReport rep;
  rep.t = t;
  rep.det_negative_everywhere = rep.det_positive_everywhere = true;
  bool in_run = false;
  std::size_t defined = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = iv.lo + (iv.hi - iv.lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    if (std::abs(s) < probe.s_margin) continue;
    SignatureSample smp;
    smp.s = s;
    try {
      const auto e = metric_eval(profile, cone_vector(profile, t, s, probe));
      smp.det_g_factored = e.det_g_factored;
      smp.det_g_direct = e.det_g;
      const double scale = std::max(std::abs(e.det_g), std::abs(e.det_g_factored));
      if (scale > 0 && std::abs(e.det_g - e.det_g_factored) > 1e-8 * scale) {
        throw ConsistencyError("factored and direct det g disagree at s = " + std::to_string(s));
      }
      Eigen::Matrix4d g;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) g(a, b) = e.g[a][b];
      const Eigen::Vector4d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(g, Eigen::EigenvaluesOnly).eigenvalues();
      const double th = detail::pattern_threshold(ev);
      int zero = 0;
      for (int a = 0; a < 4; ++a) {
        if (ev[a] > th) ++smp.positive;
        else if (ev[a] < -th) ++smp.negative;
        else ++zero;
      }
      smp.pattern = detail::sign_pattern(smp.positive, smp.negative, zero);
    } catch (const ConsistencyError&) {
      throw;
    } catch (const Error&) {
      smp.pattern = "undefined";
      rep.samples.push_back(smp);
      in_run = false;
      continue;
    }
    ++defined;
    if (!(smp.det_g_direct < 0)) rep.det_negative_everywhere = false;
    if (!(smp.det_g_direct > 0)) rep.det_positive_everywhere = false;
    if (smp.lorentzian()) {
      if (in_run) rep.lorentzian.back().hi = s;
      else rep.lorentzian.push_back(Interval{s, s});
      in_run = true;
    } else {
      in_run = false;
    }
    rep.samples.push_back(smp);
  }
  if (defined == 0) rep.det_negative_everywhere = rep.det_positive_everywhere = false;
  return rep;
}

/// Spot-checks the reverse triangle inequality F(u + v) >= F(u) + F(v),
/// F = sqrt(L), on random pairs with s in the given cone interval, and that L > 0 there.
inline ConvexityReport convexity_check(const Profile& profile, double t, Interval cone, std::size_t pairs,
                                       std::uint64_t seed = 1, const ConeProbe& probe = {}) {
  ConvexityReport rep;
  const auto lag = lagrangian_from_profile(profile);
  CounterRng rng(seed, 0xc0e);
  const double lo = cone.lo, hi = cone.hi;
  const double k = profile.k();
  Vec4 x{t, probe.r, probe.theta, probe.phi};
  auto draw = [&]() -> std::optional<Vec4> {
    const double s = rng.uniform(lo, hi);
    const Vec3 d{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (std::abs(s) < probe.s_margin) return std::nullopt;
    const double st = std::sin(probe.theta);
    const double n = std::sqrt(d[0] * d[0] / (1 - k * probe.r * probe.r) + probe.r * probe.r * (d[1] * d[1] + st * st * d[2] * d[2]));
    if (n < 1e-3) return std::nullopt;
    const double w = rng.uniform(0.5, 2.0);
    return Vec4{w / s, d[0] * w / n, d[1] * w / n, d[2] * w / n};
  };
  for (std::size_t i = 0; i < pairs; ++i) {
    const auto u = draw(), v = draw();
    if (!u || !v) continue;
    Vec4 sum{};
    for (int a = 0; a < 4; ++a) sum[a] = (*u)[a] + (*v)[a];
    double Lu, Lv, Ls;
    try {
      Lu = lag(x, *u);
      Lv = lag(x, *v);
      Ls = lag(x, sum);
    } catch (const Error&) {
      continue;
    }
    if (!(Lu > 0) || !(Lv > 0)) {
      rep.L_positive_inside = false;
      continue;
    }
    ++rep.checks;
    const double Fu = std::sqrt(Lu), Fv = std::sqrt(Lv);
    const double margin = Ls > 0 ? (std::sqrt(Ls) - Fu - Fv) / (Fu + Fv) : -1.0;
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin < -1e-12) ++rep.violations;
  }
  return rep;
}

/// Full cone analysis at time t: roots, a signature scan between consecutive
/// roots offset by `margin`, and convexity on each Lorentzian interval.
inline ConeReport cone_report(const Profile& profile, double t, std::size_t n = 200, double margin = 1e-6,
                              const RootScan& scan = {}, const ConeProbe& probe = {}) {
  ConeReport rep = null_directions(profile, t, scan);
  std::vector<double> cuts{scan.s_lo};
  for (double r : rep.null_roots) cuts.push_back(r);
  cuts.push_back(scan.s_hi);
  rep.det_negative_everywhere = rep.det_positive_everywhere = true;
  bool any = false;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Interval iv{cuts[i] + margin, cuts[i + 1] - margin};
    if (!(iv.hi > iv.lo)) continue;
    const auto part = signature_scan(profile, t, iv, n, probe);
    rep.samples.insert(rep.samples.end(), part.samples.begin(), part.samples.end());
    // Segments entirely outside the domain do not constrain the determinant sign.
    if (std::all_of(part.samples.begin(), part.samples.end(), [](const auto& x) { return x.pattern == "undefined"; })) continue;
    any = true;
    rep.lorentzian.insert(rep.lorentzian.end(), part.lorentzian.begin(), part.lorentzian.end());
    rep.det_negative_everywhere = rep.det_negative_everywhere && part.det_negative_everywhere;
    rep.det_positive_everywhere = rep.det_positive_everywhere && part.det_positive_everywhere;
  }
  if (!any) rep.det_negative_everywhere = rep.det_positive_everywhere = false;
  rep.convexity = ConvexityReport{};
  std::uint64_t seed = 1;
  for (const auto& run : rep.lorentzian) {
    // Future (tdot > 0, s > 0) and past (s < 0) halves are separate cones.
    for (const Interval iv : {Interval{run.lo, std::min(run.hi, 0.0)}, Interval{std::max(run.lo, 0.0), run.hi}}) {
      if (!(iv.hi > iv.lo)) continue;
      const auto c = convexity_check(profile, t, iv, 200, seed++, probe);
      rep.convexity.checks += c.checks;
      rep.convexity.violations += c.violations;
      rep.convexity.worst_margin = std::min(rep.convexity.worst_margin, c.worst_margin);
      rep.convexity.L_positive_inside = rep.convexity.L_positive_inside && c.L_positive_inside;
    }
  }
  return rep;
}

/// Geodesic spray in a form that stays finite on the light cone, for FLRW,
/// the cosmic-time unicorn generalisation of FLRW and the second unicorn
/// family with constant cone slopes. Empty for every other profile.
inline std::optional<Vec4> specialized_spray(const Profile& profile, const TangentPoint& pt) {
  const SpatialPoint sp{pt.x[1], pt.x[2], pt.x[3], profile.k()};
  const Vec3 vs{pt.v[1], pt.v[2], pt.v[3]};
  const double t = pt.x[0], td = pt.v[0];
  switch (profile.family()) {
    case Family::flrw: {
      const auto se = spatial_eval(sp, vs, false);
      const auto& a = profile.scale_fn("a");
      const double av = a(t), ad = a.derivative(t);
      Vec4 G{0.5 * av * ad * se.w * se.w, 0, 0, 0};
      for (int al = 0; al < 3; ++al) G[al + 1] = se.spray[al] + (ad / av) * td * vs[al];
      return G;
    }
    case Family::unicorn_flrw: {
      const auto se = spatial_eval(sp, vs, false);
      const double f = profile.param("f");
      const auto& a = profile.scale_fn("a");
      const double av = a(t), ad = a.derivative(t), w = se.w;
      Vec4 G{-av * ad * w * w / (2 * f), 0, 0, 0};
      const double c = (ad / (2 * av)) * (2 * f * td - (1 + f) * av * w) / f;
      for (int al = 0; al < 3; ++al) G[al + 1] = se.spray[al] + c * vs[al];
      return G;
    }
    case Family::unicorn_l2: {
      const auto& s2 = profile.scale_fn("s2");
      if (!s2.is_constant()) return std::nullopt;
      const auto se = spatial_eval(sp, vs, false);
      const double e2 = s2(t), e1 = profile.param("d1") * e2;
      const double c3d = profile.scale_fn("c3").derivative(t);
      const double w = se.w, ee = e1 * e2;
      Vec4 G{0.5 * c3d * (ee * td * td - w * w) / ee, 0, 0, 0};
      const double c = 0.5 * c3d * (2 * ee * td - (e1 + e2) * w) / ee;
      for (int al = 0; al < 3; ++al) G[al + 1] = se.spray[al] + c * vs[al];
      return G;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace cosmofinsler
