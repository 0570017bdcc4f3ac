#pragma once

// Constant-curvature spatial slices in (r, theta, phi):
// w^2 = rdot^2 / (1 - k r^2) + r^2 (thetadot^2 + sin^2(theta) phidot^2).

#include <array>
#include <cmath>
#include <string>

#include "cosmofinsler/errors.hpp"

namespace cosmofinsler {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;
using Sym3x3x3 = std::array<Mat3, 3>;

struct SpatialPoint {
  double r = 1.0;
  double theta = M_PI / 2;
  double phi = 0.0;
  double k = 0.0;

  void validate() const {
    if (!(r > 0)) throw DomainError("spatial point: r must be > 0");
    if (!(theta > 0 && theta < M_PI)) throw DomainError("spatial point: theta must lie in (0, pi)");
    if (!(1.0 - k * r * r > 0)) throw DomainError("spatial point: 1 - k r^2 must be > 0");
  }
};

struct SpatialEval {
  double w = 0;
  Vec3 w_cov{};          // w_alpha = w_{alpha beta} v^beta / w
  Mat3 metric{};         // w_{alpha beta}
  Mat3 inverse{};        // w^{alpha beta}
  double det_metric = 0;
  Sym3x3x3 christoffel{};  // christoffel[a][b][c] = Gamma^a_{bc}
  Vec3 spray{};          // tilde G^alpha = 1/2 Gamma^alpha_{beta gamma} v^beta v^gamma
  Vec3 dw_dx{};          // partial_alpha w at fixed velocity
};

/// Evaluates the spatial data at `pt` for velocity `v`. With
/// `need_covector` set, w = 0 is rejected since w_alpha is undefined there.
inline SpatialEval spatial_eval(const SpatialPoint& pt, const Vec3& v, bool need_covector = true) {
  pt.validate();
  const double r = pt.r, th = pt.theta, k = pt.k;
  const double chi2 = 1.0 - k * r * r;
  const double sn = std::sin(th), cs = std::cos(th);

  SpatialEval e;
  e.metric[0][0] = 1.0 / chi2;
  e.metric[1][1] = r * r;
  e.metric[2][2] = r * r * sn * sn;
  e.inverse[0][0] = chi2;
  e.inverse[1][1] = 1.0 / (r * r);
  e.inverse[2][2] = 1.0 / (r * r * sn * sn);
  e.det_metric = e.metric[0][0] * e.metric[1][1] * e.metric[2][2];

  const double w2 = v[0] * v[0] / chi2 + r * r * (v[1] * v[1] + sn * sn * v[2] * v[2]);
  e.w = std::sqrt(w2);

  auto& G = e.christoffel;
  G[0][0][0] = k * r / chi2;
  G[0][1][1] = -chi2 * r;
  G[0][2][2] = -chi2 * r * sn * sn;
  G[1][0][1] = G[1][1][0] = 1.0 / r;
  G[1][2][2] = -sn * cs;
  G[2][0][2] = G[2][2][0] = 1.0 / r;
  G[2][1][2] = G[2][2][1] = cs / sn;

  for (int a = 0; a < 3; ++a) {
    double acc = 0;
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) acc += G[a][b][c] * v[b] * v[c];
    e.spray[a] = 0.5 * acc;
  }

  if (e.w == 0.0) {
    if (need_covector) {
      throw DegenerateError("spatial norm singular direction: w = 0 (rdot = thetadot = phidot = 0)");
    }
    return e;
  }
  for (int a = 0; a < 3; ++a) e.w_cov[a] = e.metric[a][a] * v[a] / e.w;

  const double dw2_dr = 2.0 * k * r * v[0] * v[0] / (chi2 * chi2) + 2.0 * r * (v[1] * v[1] + sn * sn * v[2] * v[2]);
  const double dw2_dth = 2.0 * r * r * sn * cs * v[2] * v[2];
  e.dw_dx = {dw2_dr / (2.0 * e.w), dw2_dth / (2.0 * e.w), 0.0};
  return e;
}

}  // namespace cosmofinsler
