#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "cosmofinsler/errors.hpp"
#include "cosmofinsler/jet.hpp"

namespace cosmofinsler {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<Vec4, 4>;
/// Rank-3 array, indexed [a][b][c] in coordinate order (t, r, theta, phi).
using Tensor3 = std::array<Mat4, 4>;

/// A point of the tangent bundle: base coordinates (t, r, theta, phi) and
/// fibre coordinates (tdot, rdot, thetadot, phidot).
struct TangentPoint {
  Vec4 x{0.0, 1.0, M_PI / 2, 0.0};
  Vec4 v{1.0, 0.0, 0.0, 0.0};

  double t() const { return x[0]; }
  double r() const { return x[1]; }
  double theta() const { return x[2]; }
  double phi() const { return x[3]; }
  double tdot() const { return v[0]; }

  TangentPoint scaled(double lambda) const {
    TangentPoint p = *this;
    for (auto& c : p.v) c *= lambda;
    return p;
  }
};

inline double max_abs(const Vec4& a) {
  double m = 0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}
inline double max_abs(const Mat4& a) {
  double m = 0;
  for (const auto& row : a) m = std::max(m, max_abs(row));
  return m;
}
inline double max_abs(const Tensor3& a) {
  double m = 0;
  for (const auto& mat : a) m = std::max(m, max_abs(mat));
  return m;
}

template <class T>
double max_abs_diff(const T& a, const T& b);

template <>
inline double max_abs_diff(const Vec4& a, const Vec4& b) {
  double m = 0;
  for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}
template <>
inline double max_abs_diff(const Mat4& a, const Mat4& b) {
  double m = 0;
  for (int i = 0; i < 4; ++i) m = std::max(m, max_abs_diff(a[i], b[i]));
  return m;
}
template <>
inline double max_abs_diff(const Tensor3& a, const Tensor3& b) {
  double m = 0;
  for (int i = 0; i < 4; ++i) m = std::max(m, max_abs_diff(a[i], b[i]));
  return m;
}

/// max|a - b| / max|b|, or the absolute difference when b vanishes.
template <class T>
double relative_error(const T& a, const T& b) {
  const double scale = max_abs(b);
  const double diff = max_abs_diff(a, b);
  return scale > 0 ? diff / scale : diff;
}

/// Inverse and determinant of a 4x4 matrix by Gauss-Jordan elimination with
/// partial pivoting on the leading values. Works for doubles and jets.
template <class S>
struct Inverse4 {
  std::array<std::array<S, 4>, 4> inv;
  double det = 0;
};

template <class S>
Inverse4<S> invert4(std::array<std::array<S, 4>, 4> m) {
  Inverse4<S> out;
  auto& inv = out.inv;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) inv[i][j] = S(i == j ? 1.0 : 0.0);
  double det = 1.0;
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(value_of(m[r][col])) > std::abs(value_of(m[piv][col]))) piv = r;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      std::swap(inv[piv], inv[col]);
      det = -det;
    }
    const double pv = value_of(m[col][col]);
    det *= pv;
    if (pv == 0.0) {
      out.det = 0.0;
      return out;
    }
    const S rinv = 1.0 / m[col][col];
    for (int j = 0; j < 4; ++j) {
      m[col][j] = m[col][j] * rinv;
      inv[col][j] = inv[col][j] * rinv;
    }
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const S f = m[r][col];
      if (value_of(f) == 0.0 && !is_jet_v<S>) continue;
      for (int j = 0; j < 4; ++j) {
        m[r][j] = m[r][j] - f * m[col][j];
        inv[r][j] = inv[r][j] - f * inv[col][j];
      }
    }
  }
  out.det = det;
  return out;
}

inline double determinant4(const Mat4& m) { return invert4<double>(m).det; }

/// Frobenius-type scale used for the degeneracy threshold |det g| < eps ||g||^4.
inline double norm4(const Mat4& m) {
  double acc = 0;
  for (const auto& row : m)
    for (double x : row) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace cosmofinsler
