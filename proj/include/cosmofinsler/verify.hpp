#pragma once

// Point-wise identity checks shared by the CLI, the tests and the acceptance suite.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "cosmofinsler/cosmo_geometry.hpp"
#include "cosmofinsler/oracle.hpp"
#include "cosmofinsler/profiles.hpp"
#include "cosmofinsler/tensors.hpp"

namespace cosmofinsler {

/// Relative deviation of the closed-form tensors from the oracle. Each
/// deviation is divided by the oracle tensor's magnitude or, where that can
/// vanish identically, by a natural magnitude of the same homogeneity
/// (max|g| / |tdot| for C, max|N| max|xdot| for G, max|N| max|g| / |tdot| for P).
struct OracleComparison {
  double g = 0, g_inv = 0, C = 0, G = 0, N = 0, P = 0;

  double max() const { return std::max({g, g_inv, C, G, N, P}); }
  void merge(const OracleComparison& o) {
    g = std::max(g, o.g);
    g_inv = std::max(g_inv, o.g_inv);
    C = std::max(C, o.C);
    G = std::max(G, o.G);
    N = std::max(N, o.N);
    P = std::max(P, o.P);
  }
};

inline OracleComparison compare_with_oracle(const GeometryEval& e, const OracleEval& o) {
  auto rel = [](double diff, double scale) { return scale > 0 ? diff / scale : diff; };
  const double td = std::abs(e.tdot);
  const double gmax = max_abs(o.g), nmax = max_abs(o.N), vmax = max_abs(e.point.v);
  OracleComparison c;
  c.g = relative_error(e.g, o.g);
  c.g_inv = relative_error(e.g_inv, o.g_inv);
  c.C = rel(max_abs_diff(e.C, o.C), std::max(max_abs(o.C), gmax / td));
  c.G = rel(max_abs_diff(e.G, o.G), std::max(max_abs(o.G), nmax * vmax));
  c.N = relative_error(e.N, o.N);
  c.P = rel(max_abs_diff(e.P, o.P), std::max({max_abs(o.P), o.landsberg_scale, e.landsberg_scale, nmax * gmax / td}));
  return c;
}

/// Closed form against the oracle at one point.
inline OracleComparison oracle_equivalence(const Profile& profile, const TangentPoint& pt) {
  const auto e = geometry_eval(profile, pt, Level::landsberg);
  const auto o = oracle_eval(lagrangian_from_profile(profile), pt);
  return compare_with_oracle(e, o);
}

/// Largest relative Killing residual max_I |X^C_I(L)| / |L|.
inline double killing_max(const Lagrangian& lag, const TangentPoint& pt, double k) {
  const auto res = killing_residual(lag, pt, k);
  return *std::max_element(res.relative.begin(), res.relative.end());
}

/// Euler identities xdot^a d.a L = 2 L, g_ab xdot^a xdot^b = L and
/// C_abc xdot^a = 0, as relative residuals.
struct EulerResiduals {
  double lagrangian = 0;
  double metric = 0;
  double cartan = 0;
  double max() const { return std::max({lagrangian, metric, cartan}); }
};

inline EulerResiduals euler_residuals(const Profile& profile, const TangentPoint& pt) {
  const auto e = geometry_eval(profile, pt, Level::cartan);
  const auto lag = lagrangian_from_profile(profile);
  std::array<Jet8_1, 4> X, V;
  for (int a = 0; a < 4; ++a) {
    X[a] = Jet8_1::variable(a, pt.x[a]);
    V[a] = Jet8_1::variable(4 + a, pt.v[a]);
  }
  const Jet8_1 Lj = lag(X, V);
  const double L = Lj.value();
  double euler = 0, scale = 0;
  for (int a = 0; a < 4; ++a) {
    euler += pt.v[a] * Lj.coeff(5 + a);
    scale = std::max(scale, std::abs(pt.v[a] * Lj.coeff(5 + a)));
  }
  EulerResiduals r;
  r.lagrangian = std::abs(euler - 2 * L) / std::max(scale, 2 * std::abs(L));

  double gl = 0, gscale = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      gl += e.g[a][b] * pt.v[a] * pt.v[b];
      gscale = std::max(gscale, std::abs(e.g[a][b] * pt.v[a] * pt.v[b]));
    }
  r.metric = std::abs(gl - L) / std::max(gscale, std::abs(L));

  double cmax = 0, cscale = 0;
  for (int b = 0; b < 4; ++b)
    for (int c = 0; c < 4; ++c) {
      double acc = 0;
      for (int a = 0; a < 4; ++a) {
        acc += e.C[a][b][c] * pt.v[a];
        cscale = std::max(cscale, std::abs(e.C[a][b][c] * pt.v[a]));
      }
      cmax = std::max(cmax, std::abs(acc));
    }
  // Scaled against g so that a vanishing Cartan tensor is not divided by noise.
  r.cartan = cmax / std::max(cscale, max_abs(e.g));
  return r;
}

/// Homogeneity of g (0), C (-1), G (2), N (1) and P (0) under xdot -> lambda xdot.
inline double homogeneity_residual(const Profile& profile, const TangentPoint& pt, double lambda) {
  const auto e1 = geometry_eval(profile, pt, Level::landsberg);
  const auto e2 = geometry_eval(profile, pt.scaled(lambda), Level::landsberg);
  Tensor3 C1 = e1.C;
  for (auto& m : C1)
    for (auto& row : m)
      for (auto& x : row) x /= lambda;
  Vec4 G1 = e1.G;
  for (auto& x : G1) x *= lambda * lambda;
  Mat4 N1 = e1.N;
  for (auto& row : N1)
    for (auto& x : row) x *= lambda;
  const double cscale = std::max(max_abs(C1), max_abs(e1.g) / std::abs(lambda * e1.tdot));
  const double pscale = std::max({max_abs(e1.P), e1.landsberg_scale, max_abs(e1.N) * max_abs(e1.g) / std::abs(e1.tdot)});
  return std::max({relative_error(e2.g, e1.g), max_abs_diff(e2.C, C1) / cscale, relative_error(e2.G, G1),
                   relative_error(e2.N, N1), max_abs_diff(e2.P, e1.P) / pscale});
}

/// |det_direct - det_factored| / |det_direct|.
inline double determinant_residual(const GeometryEval& e) {
  const double scale = std::max(std::abs(e.det_g), std::abs(e.det_g_factored));
  return scale > 0 ? std::abs(e.det_g - e.det_g_factored) / scale : 0.0;
}

}  // namespace cosmofinsler
