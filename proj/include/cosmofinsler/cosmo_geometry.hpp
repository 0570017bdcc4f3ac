#pragma once

// Closed-form geometry of L = tdot^2 h(t, s)^2.
//
// Notation: primes are s-derivatives, w_a = (-s, w_alpha), T = tdot w,
// phi1 = h (h' - s h'') - s h'^2, phi2 = h h''' + 3 h' h''. Then
//   2 C_abc = phi1 T_abc + (phi2 / tdot) w_a w_b w_c,
//   G^0 = tdot^2 Phi,  G^alpha = tG^alpha + 1/2 tdot xdot^alpha Psi,
//   Phi = (h'' h_t - h' h_t') / (2 h h''),  Psi = (s h'' h_t + (h - s h') h_t') / (s h h''),
//   grad w_a = p tdot w_a,  grad T_abc = q tdot T_abc,
//   2 P_abc = R2 T_abc + R1 w_a w_b w_c,
//   R1 = grad(phi2 / tdot) + 3 phi2 p,  R2 = grad(phi1) + tdot q phi1.

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <string>

#include "cosmofinsler/errors.hpp"
#include "cosmofinsler/profiles.hpp"
#include "cosmofinsler/spatial.hpp"
#include "cosmofinsler/tensors.hpp"

namespace cosmofinsler {

/// A sum of terms: its value and the largest magnitude among the terms.
struct Residual {
  double raw = 0;
  double scale = 0;

  static Residual of(std::initializer_list<double> terms) {
    Residual r;
    for (double t : terms) {
      r.raw += t;
      r.scale = std::max(r.scale, std::abs(t));
    }
    return r;
  }
  double relative() const { return scale > 0 ? std::abs(raw) / scale : std::abs(raw); }
};

/// The scalar factors whose vanishing defines the six branches of Landsberg
/// candidates: D = h s d_space h_t', and the four integrability factors.
struct BranchResiduals {
  Residual d_time;   // h_t'                                        (branch 1)
  Residual d_space;  // -s h'^2 + h (h' + s h'')                    (branch 2)
  Residual factor0;  // h''                                         (branch 3)
  Residual factor1;  // s h'^2 + h (-h' + s h'')                    (branch 4)
  Residual factor2;  // s h'' h_t + (h - s h') h_t'                 (branch 5)
  Residual factor3;  // unicorn factor                              (branch 6)
  double D = 0;

  /// Residual of branch 1..6.
  const Residual& branch(int i) const {
    switch (i) {
      case 1: return d_time;
      case 2: return d_space;
      case 3: return factor0;
      case 4: return factor1;
      case 5: return factor2;
      case 6: return factor3;
    }
    throw ParameterError("branch index must lie in 1..6");
  }
};

inline BranchResiduals branch_residuals(const ProfileJet& j) {
  const double s = j.s, h = j.h, h1 = j.hs1, h2 = j.hs2;
  const double ht = j.ht, ht1 = j.hts1, ht2 = j.hts2;
  BranchResiduals b;
  // Normalised so a pure power of s compares against h and s h'.
  b.d_time.raw = ht1;
  b.d_time.scale = std::max({std::abs(ht1), std::abs(ht / s)});
  b.d_space = Residual::of({-s * h1 * h1, h * h1, s * h * h2});
  b.factor0.raw = h2;
  b.factor0.scale = std::max(std::abs(h), std::abs(s * h1)) / (s * s);
  b.factor1 = Residual::of({s * h1 * h1, -h * h1, s * h * h2});
  b.factor2 = Residual::of({s * h2 * ht, h * ht1, -s * h1 * ht1});
  b.factor3 = Residual::of({h2 * h1 * s * h1 * h1 * ht, h2 * h1 * h * h1 * ht, -h2 * h1 * s * h * h2 * ht,
                            -2 * s * h2 * h * h1 * h1 * ht1, 2 * s * h2 * h * h * h2 * ht1,
                            h * h1 * s * h1 * h1 * ht2, -h * h1 * h * h1 * ht2, -h * h1 * s * h * h2 * ht2});
  b.D = h * s * b.d_space.raw * ht1;
  return b;
}

enum class Level { metric = 0, cartan = 1, spray = 2, connection = 3, landsberg = 4 };

inline const char* level_name(Level l) {
  switch (l) {
    case Level::metric: return "metric";
    case Level::cartan: return "cartan";
    case Level::spray: return "spray";
    case Level::connection: return "connection";
    case Level::landsberg: return "landsberg";
  }
  return "";
}

inline Level level_from_name(const std::string& n) {
  for (auto l : {Level::metric, Level::cartan, Level::spray, Level::connection, Level::landsberg})
    if (n == level_name(l)) return l;
  throw ConfigError("unknown level '" + n + "' (expected metric, cartan, spray, connection or landsberg)");
}

struct GeometryThresholds {
  /// |h''| s^2 below this times max(|h|, |s h'|) is a degenerate vertical Hessian.
  double hessian = 1e-10;
  /// |s h'| below this times |h| makes the inverse metric singular.
  double inverse = 1e-10;
};

struct GeometryEval {
  Level level = Level::metric;
  TangentPoint point;
  double tdot = 0, w = 0, s = 0;
  ProfileJet jet;
  SpatialEval spatial;

  Mat4 g{}, g_inv{};
  double det_g = 0;           // direct 4x4 determinant
  double det_g_factored = 0;  // det w_ab h^4 h'^2 / s^2 h h''
  Vec4 w_cov{};               // w_a = (-s, w_alpha)

  double phi1 = 0, phi2 = 0;
  Tensor3 T{}, C{};

  double Phi = 0, Psi = 0;  // G^0 = tdot^2 Phi, G^alpha = tG^alpha + 1/2 tdot xdot^alpha Psi
  Vec4 G{};
  Mat4 N{};

  double p = 0, q = 0;
  Residual R1, R2;
  Tensor3 P{};
  /// Largest magnitude among the summands of P_abc.
  double landsberg_scale = 0;
  BranchResiduals branches;

  double landsberg_relative() const { return landsberg_scale > 0 ? max_abs(P) / landsberg_scale : max_abs(P); }
};

namespace detail {

inline double quotient_derivative(double num, double dnum, double den, double dden) {
  return (dnum * den - num * dden) / (den * den);
}

}  // namespace detail

/// Scalar jet of a function f(t, s): value, f', and partial_t f.
struct ScalarJet {
  double f = 0, fs = 0, ft = 0;
};

/// Dynamical covariant derivative of f(t, s): tdot (f_t - f' h_t' / h''); with
/// `divide_by_tdot`, the derivative of f / tdot, which adds 2 f G^0 / tdot^2.
inline double dyn_scalar(const ProfileJet& j, const ScalarJet& f, double tdot, bool divide_by_tdot = false,
                         const GeometryThresholds& th = {}) {
  const double scale = std::max(std::abs(j.h), std::abs(j.s * j.hs1));
  if (!(std::abs(j.hs2) * j.s * j.s > th.hessian * scale))
    throw DegenerateError("degenerate vertical Hessian: h'' = 0");
  const double grad = tdot * (f.ft - f.fs * j.hts1 / j.hs2);
  if (!divide_by_tdot) return grad;
  const double Phi = (j.hs2 * j.ht - j.hs1 * j.hts1) / (2.0 * j.h * j.hs2);
  return grad / tdot + 2.0 * f.f * Phi;
}

/// The tensor T_abc = d.a d.b d.c (tdot w).
inline Tensor3 t_tensor(double tdot, const SpatialEval& se) {
  Tensor3 T{};
  const double w = se.w;
  const auto& wc = se.w_cov;
  const auto& wm = se.metric;
  for (int al = 0; al < 3; ++al)
    for (int be = 0; be < 3; ++be) {
      const double mixed = (wm[al][be] - wc[al] * wc[be]) / w;
      T[0][al + 1][be + 1] = T[al + 1][0][be + 1] = T[al + 1][be + 1][0] = mixed;
      for (int ga = 0; ga < 3; ++ga) {
        T[al + 1][be + 1][ga + 1] = tdot / (w * w) *
                                    (3.0 * wc[al] * wc[be] * wc[ga] - wm[al][be] * wc[ga] - wm[al][ga] * wc[be] -
                                     wm[be][ga] * wc[al]);
      }
    }
  return T;
}

/// Metric, determinants and branch factors only. Unlike geometry_eval this
/// accepts a degenerate vertical Hessian, so degenerate profiles can be probed.
inline GeometryEval metric_eval(const Profile& profile, const TangentPoint& pt) {
  GeometryEval e;
  e.level = Level::metric;
  e.point = pt;
  e.tdot = pt.v[0];
  if (e.tdot == 0.0) throw DomainError("tdot = 0: s = w / tdot undefined");
  const SpatialPoint sp{pt.x[1], pt.x[2], pt.x[3], profile.k()};
  e.spatial = spatial_eval(sp, {pt.v[1], pt.v[2], pt.v[3]}, true);
  e.w = e.spatial.w;
  e.s = e.w / e.tdot;
  e.jet = eval_jet(profile, pt.x[0], e.s);

  const auto& j = e.jet;
  const auto& se = e.spatial;
  const double s = e.s, h = j.h, h1 = j.hs1, h2 = j.hs2;
  e.w_cov = {-s, se.w_cov[0], se.w_cov[1], se.w_cov[2]};
  e.g[0][0] = h * h - 2.0 * s * h * h1 + s * s * (h1 * h1 + h * h2);
  for (int al = 0; al < 3; ++al) {
    e.g[0][al + 1] = e.g[al + 1][0] = se.w_cov[al] * (h * h1 - s * (h1 * h1 + h * h2));
    for (int be = 0; be < 3; ++be)
      e.g[al + 1][be + 1] = h * h1 * se.metric[al][be] / s + (s * h1 * h1 + s * h * h2 - h * h1) * se.w_cov[al] * se.w_cov[be] / s;
  }
  e.det_g = determinant4(e.g);
  e.det_g_factored = se.det_metric * (std::pow(h, 4) * h1 * h1 / (s * s)) * h * h2;
  e.branches = branch_residuals(j);
  return e;
}

/// |h''| s^2 / max(|h|, |s h'|): zero on the degenerate Hessian locus.
inline double hessian_relative(const ProfileJet& j) {
  const double scale = std::max(std::abs(j.h), std::abs(j.s * j.hs1));
  return scale > 0 ? std::abs(j.hs2) * j.s * j.s / scale : std::abs(j.hs2);
}

/// Evaluates the closed-form geometry of `profile` at `pt` up to `level`.
inline GeometryEval geometry_eval(const Profile& profile, const TangentPoint& pt, Level level = Level::landsberg,
                                  const GeometryThresholds& th = {}) {
  GeometryEval e = metric_eval(profile, pt);
  e.level = level;
  const auto& j = e.jet;
  const auto& se = e.spatial;
  const double s = e.s, td = e.tdot, w = e.w;
  const double h = j.h, h1 = j.hs1, h2 = j.hs2, h3 = j.hs3, h4 = j.hs4;
  const double ht = j.ht, ht1 = j.hts1, ht2 = j.hts2, ht3 = j.hts3;
  const bool hessian_ok = hessian_relative(j) > th.hessian;

  // Inverse metric.
  if (!hessian_ok) throw DegenerateError("degenerate vertical Hessian: h'' = 0 (inverse metric undefined)");
  if (!(std::abs(s * h1) > th.inverse * std::abs(h))) throw DegenerateError("inverse metric singular: h' = 0");
  {
    const double den = h * h * h * h2;
    const double A = (h1 * h1 + h * h2) / den;
    const double B = (s * (h1 * h1 + h * h2) - h * h1) / den;
    const double Cs = s / (h * h1);
    const double Ds = (h - s * h1) * (h * h1 - s * (h1 * h1 + h * h2)) / (den * h1);
    e.g_inv[0][0] = A;
    for (int al = 0; al < 3; ++al) {
      e.g_inv[0][al + 1] = e.g_inv[al + 1][0] = B * pt.v[al + 1] / w;
      for (int be = 0; be < 3; ++be)
        e.g_inv[al + 1][be + 1] = Cs * se.inverse[al][be] + Ds * pt.v[al + 1] * pt.v[be + 1] / (w * w);
    }
  }
  if (level == Level::metric) return e;

  // Cartan tensor.
  e.phi1 = h * (h1 - s * h2) - s * h1 * h1;
  e.phi2 = h * h3 + 3.0 * h1 * h2;
  e.T = t_tensor(td, se);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        e.C[a][b][c] = 0.5 * e.phi1 * e.T[a][b][c] + 0.5 * e.phi2 / td * e.w_cov[a] * e.w_cov[b] * e.w_cov[c];
  if (level == Level::cartan) return e;

  // Spray.
  const double num0 = h2 * ht - h1 * ht1, den0 = 2.0 * h * h2;
  const double numS = s * h2 * ht + (h - s * h1) * ht1, denS = s * h * h2;
  e.Phi = num0 / den0;
  e.Psi = numS / denS;
  e.G[0] = td * td * e.Phi;
  for (int al = 0; al < 3; ++al) e.G[al + 1] = se.spray[al] + 0.5 * td * pt.v[al + 1] * e.Psi;
  if (level == Level::spray) return e;

  // Nonlinear connection N^a_b = d.b G^a.
  const double dPhi = detail::quotient_derivative(num0, h3 * ht - h1 * ht2, den0, 2.0 * (h1 * h2 + h * h3));
  const double dPsi = detail::quotient_derivative(numS, h2 * ht + s * h3 * ht + (h - s * h1) * ht2, denS,
                                                  h * h2 + s * h1 * h2 + s * h * h3);
  e.N[0][0] = td * (2.0 * e.Phi - s * dPhi);
  for (int al = 0; al < 3; ++al) {
    e.N[0][al + 1] = td * dPhi * se.w_cov[al];
    e.N[al + 1][0] = 0.5 * pt.v[al + 1] * (e.Psi - s * dPsi);
    for (int be = 0; be < 3; ++be) {
      double gam = 0;
      for (int ga = 0; ga < 3; ++ga) gam += se.christoffel[al][be][ga] * pt.v[ga + 1];
      e.N[al + 1][be + 1] = gam + (al == be ? 0.5 * td * e.Psi : 0.0) + 0.5 * pt.v[al + 1] * dPsi * se.w_cov[be];
    }
  }
  if (level == Level::connection) return e;

  // Landsberg tensor.
  const double bracket = -h2 * h2 * ht + (h1 * h2 + h * h3) * ht1 - h * h2 * ht2;
  e.p = bracket / (2.0 * h * h2 * h2);
  e.q = (-s * h2 * h2 * ht + (h2 * (2.0 * h + s * h1) + s * h * h3) * ht1 - s * h * h2 * ht2) / (2.0 * s * h * h2 * h2);

  // grad(phi2 / tdot) + 3 phi2 p, with d_t phi2 and phi2' = 4 h' h''' + h h'''' + 3 h''^2 expanded.
  const double k_ = ht1 / h2;
  e.R1 = Residual::of({ht * h3, h * ht3, 3.0 * ht1 * h2, 3.0 * h1 * ht2,
                       -4.0 * h1 * h3 * k_, -h * h4 * k_, -3.0 * h2 * h2 * k_,
                       2.0 * e.phi2 * e.Phi, 3.0 * e.phi2 * e.p});
  // grad(phi1) + tdot q phi1, with phi1' = -s phi2.
  e.R2 = Residual::of({td * ht * (h1 - s * h2), td * h * (ht1 - s * ht2), -2.0 * td * s * h1 * ht1,
                       td * s * e.phi2 * k_, td * e.q * e.phi1});

  double www_max = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        const double www = e.w_cov[a] * e.w_cov[b] * e.w_cov[c];
        www_max = std::max(www_max, std::abs(www));
        e.P[a][b][c] = 0.5 * (e.R2.raw * e.T[a][b][c] + e.R1.raw * www);
      }
  e.landsberg_scale = 0.5 * std::max(e.R2.scale * max_abs(e.T), e.R1.scale * www_max);
  return e;
}

/// (R1, R2) and the assembled Landsberg tensor norm.
struct LandsbergResiduals {
  Residual R1, R2;
  double max_P = 0;
  double relative_P = 0;
};

inline LandsbergResiduals landsberg_residuals(const Profile& profile, const TangentPoint& pt,
                                              const GeometryThresholds& th = {}) {
  const auto e = geometry_eval(profile, pt, Level::landsberg, th);
  return {e.R1, e.R2, max_abs(e.P), e.landsberg_relative()};
}

}  // namespace cosmofinsler
