#pragma once

// Generic Finsler geometry of an arbitrary Lagrangian L(x, xdot).
//
// Everything here is computed from first principles by evaluating L on
// truncated Taylor jets in all eight tangent-bundle coordinates:
//   g_ab = 1/2 d.a d.b L,  C_abc = 1/4 d.a d.b d.c L,
//   G^a = 1/4 g^ab (xdot^c d_c d.b L - d_b L),  N^a_b = d.b G^a,
//   Gamma^c_ab (Chern-Rund) from the horizontal metric-compatibility formula,
//   P_abc = xdot^d (delta_d C_abc - Gamma C - Gamma C - Gamma C),
//   R = (delta_a N^a_b - delta_b N^a_a) xdot^b.
// It shares no formulas with the closed-form cosmological evaluator.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "cosmofinsler/errors.hpp"
#include "cosmofinsler/jet.hpp"
#include "cosmofinsler/profiles.hpp"
#include "cosmofinsler/tensors.hpp"

namespace cosmofinsler {

template <class S>
using LagrangianSignature = S(const std::array<S, 4>&, const std::array<S, 4>&);

/// Black-box Lagrangian. Construct from a generic callable
/// `(const auto& x, const auto& v)` that works on doubles and jets.
class Lagrangian {
 public:
  Lagrangian() = default;
  template <class F>
  explicit Lagrangian(const F& f) : fns_(f) {}

  template <class S>
  S operator()(const std::array<S, 4>& x, const std::array<S, 4>& v) const {
    return fns_.template call<S>(x, v);
  }

  double operator()(const TangentPoint& p) const { return (*this)(p.x, p.v); }

 private:
  ScalarOverloadSet<LagrangianSignature, double, Jet8_1, Jet8_4, Jet8_5> fns_;
};

/// w for velocity v at position x on a slice of curvature k.
template <class S>
S spatial_norm(const std::array<S, 4>& x, const std::array<S, 4>& v, double k) {
  using std::sin;
  using std::sqrt;
  const S& r = x[1];
  const S sn = sin(x[2]);
  return sqrt(v[1] * v[1] / (1.0 - k * r * r) + r * r * (v[2] * v[2] + sn * sn * v[3] * v[3]));
}

/// L = tdot^2 h(t, w / tdot)^2 for a profile.
inline Lagrangian lagrangian_from_profile(const Profile& profile) {
  return Lagrangian([profile](const auto& x, const auto& v) {
    const auto w = spatial_norm(x, v, profile.k());
    const auto s = w / v[0];
    const auto hv = profile.h(x[0], s);
    return v[0] * v[0] * hv * hv;
  });
}

struct OracleRequest {
  bool landsberg = true;
  bool curvature = true;
  bool berwald = false;
  /// |det g| below det_threshold * ||g||^4 is treated as degenerate.
  double det_threshold = 1e-13;
};

struct OracleEval {
  double L = 0;
  Mat4 g{}, g_inv{};
  double det_g = 0;
  Tensor3 C{};
  Vec4 C_trace{};
  Vec4 G{};
  Mat4 N{};
  Tensor3 chern_rund{};  // [c][a][b] = Gamma^c_ab
  Tensor3 P{};
  Vec4 P_trace{};
  /// Largest magnitude among the summands of P_abc, for relative residuals.
  double landsberg_scale = 0;
  Tensor3 curvature{};  // [c][a][b] = R^c_ab
  double R = 0;
  bool has_berwald = false;
  double berwald_indicator = 0;  // max |d.b d.c d.d G^a|
  double spray_hessian_max = 0;  // max |d.b d.c G^a|

  double landsberg_relative() const { return landsberg_scale > 0 ? max_abs(P) / landsberg_scale : max_abs(P); }
};

namespace detail {

template <class J>
std::array<J, 4> slice(const std::array<J, 8>& z, int off) {
  return {z[off], z[off + 1], z[off + 2], z[off + 3]};
}

template <int K>
OracleEval oracle_core(const Lagrangian& lag, const TangentPoint& pt, const OracleRequest& req) {
  static_assert(K >= 4, "the Landsberg tensor and curvature need fourth-order jets");
  using J = Jet<8, K>;
  using J2 = Jet<8, K - 2>;
  using J3 = Jet<8, K - 3>;

  std::array<J, 4> X, V;
  for (int a = 0; a < 4; ++a) {
    X[a] = J::variable(a, pt.x[a]);
    V[a] = J::variable(4 + a, pt.v[a]);
  }
  const J Lj = lag(X, V);

  OracleEval ev;
  ev.L = Lj.value();
  if (!std::isfinite(ev.L)) throw DomainError("oracle: Lagrangian is not finite at the point");

  std::array<Jet<8, K - 1>, 4> dv;
  for (int a = 0; a < 4; ++a) dv[a] = Lj.d(4 + a);

  std::array<std::array<J2, 4>, 4> gj;
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) {
      gj[a][b] = dv[a].d(4 + b) * 0.5;
      gj[b][a] = gj[a][b];
    }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) ev.g[a][b] = gj[a][b].value();

  const double gnorm = norm4(ev.g);
  const auto inv = invert4<J2>(gj);
  ev.det_g = inv.det;
  if (!(std::abs(ev.det_g) >= req.det_threshold * std::pow(gnorm, 4))) {
    throw DegenerateError("metric degenerate at point: |det g| = " + std::to_string(std::abs(ev.det_g)));
  }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) ev.g_inv[a][b] = inv.inv[a][b].value();

  // Geodesic spray as a jet of order K-2.
  std::array<J2, 4> E;
  for (int b = 0; b < 4; ++b) {
    J2 acc = -(Lj.d(b).template truncate<K - 2>());
    for (int c = 0; c < 4; ++c) acc += V[c].template truncate<K - 2>() * dv[b].d(c);
    E[b] = acc;
  }
  std::array<J2, 4> Gj;
  for (int a = 0; a < 4; ++a) {
    J2 acc;
    for (int b = 0; b < 4; ++b) acc += inv.inv[a][b] * E[b];
    Gj[a] = acc * 0.25;
    ev.G[a] = Gj[a].value();
  }
  std::array<std::array<J3, 4>, 4> Nj;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Nj[a][b] = Gj[a].d(4 + b);
      ev.N[a][b] = Nj[a][b].value();
    }

  // Cartan tensor with its first derivatives.
  std::array<std::array<std::array<J3, 4>, 4>, 4> Cj;
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) {
      const auto gab = dv[a].d(4 + b);
      for (int c = b; c < 4; ++c) {
        const J3 cv = gab.d(4 + c) * 0.25;
        Cj[a][b][c] = Cj[a][c][b] = Cj[b][a][c] = Cj[b][c][a] = Cj[c][a][b] = Cj[c][b][a] = cv;
      }
    }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) ev.C[a][b][c] = Cj[a][b][c].value();
  for (int a = 0; a < 4; ++a) {
    double acc = 0;
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) acc += ev.g_inv[b][c] * ev.C[a][b][c];
    ev.C_trace[a] = acc;
  }

  // First derivative of a jet: coefficient of the linear monomial.
  auto dx = [](const auto& j, int var) { return j.coeff(static_cast<std::size_t>(1 + var)); };

  // delta_a g_bd = d_a g_bd - N^e_a d.e g_bd
  auto delta_g = [&](int a, int b, int d) {
    double acc = dx(gj[b][d], a);
    for (int e = 0; e < 4; ++e) acc -= ev.N[e][a] * dx(gj[b][d], 4 + e);
    return acc;
  };
  for (int c = 0; c < 4; ++c)
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b) {
        double acc = 0;
        for (int d = 0; d < 4; ++d) acc += ev.g_inv[c][d] * (delta_g(a, b, d) + delta_g(b, a, d) - delta_g(d, a, b));
        ev.chern_rund[c][a][b] = ev.chern_rund[c][b][a] = 0.5 * acc;
      }

  if (req.landsberg) {
    const auto& xd = pt.v;
    double scale = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b)
        for (int c = b; c < 4; ++c) {
          const J3& cj = Cj[a][b][c];
          double t_partial = 0, t_conn = 0, t_a = 0, t_b = 0, t_c = 0;
          for (int d = 0; d < 4; ++d) {
            t_partial += xd[d] * dx(cj, d);
            for (int e = 0; e < 4; ++e) {
              t_conn += xd[d] * ev.N[e][d] * dx(cj, 4 + e);
              t_a += xd[d] * ev.chern_rund[e][d][a] * ev.C[e][b][c];
              t_b += xd[d] * ev.chern_rund[e][d][b] * ev.C[a][e][c];
              t_c += xd[d] * ev.chern_rund[e][d][c] * ev.C[a][b][e];
            }
          }
          const double pv = t_partial - t_conn - t_a - t_b - t_c;
          for (double tv : {t_partial, t_conn, t_a, t_b, t_c}) scale = std::max(scale, std::abs(tv));
          ev.P[a][b][c] = ev.P[a][c][b] = ev.P[b][a][c] = ev.P[b][c][a] = ev.P[c][a][b] = ev.P[c][b][a] = pv;
        }
    ev.landsberg_scale = scale;
    for (int a = 0; a < 4; ++a) {
      double acc = 0;
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c) acc += ev.g_inv[b][c] * ev.P[a][b][c];
      ev.P_trace[a] = acc;
    }
  }

  if (req.curvature) {
    // delta_a N^c_b = d_a N^c_b - N^e_a d.e N^c_b
    auto delta_N = [&](int a, int c, int b) {
      double acc = dx(Nj[c][b], a);
      for (int e = 0; e < 4; ++e) acc -= ev.N[e][a] * dx(Nj[c][b], 4 + e);
      return acc;
    };
    double R = 0;
    for (int c = 0; c < 4; ++c)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) ev.curvature[c][a][b] = delta_N(a, c, b) - delta_N(b, c, a);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) R += ev.curvature[a][a][b] * pt.v[b];
    ev.R = R;
  }

  if constexpr (K >= 5) {
    if (req.berwald) {
      double ind = 0, hess = 0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          const auto gb = Gj[a].d(4 + b);
          for (int c = b; c < 4; ++c) {
            const auto gbc = gb.d(4 + c);
            hess = std::max(hess, std::abs(gbc.value()));
            for (int d = c; d < 4; ++d) ind = std::max(ind, std::abs(dx(gbc, 4 + d)));
          }
        }
      ev.has_berwald = true;
      ev.berwald_indicator = ind;
      ev.spray_hessian_max = hess;
    }
  }
  return ev;
}

}  // namespace detail

/// Evaluates the requested tensors of `lag` at `pt` from first principles.
/// The Berwald indicator needs fifth-order jets and is only computed on request.
inline OracleEval oracle_eval(const Lagrangian& lag, const TangentPoint& pt, const OracleRequest& req = {}) {
  if (req.berwald) return detail::oracle_core<5>(lag, pt, req);
  return detail::oracle_core<4>(lag, pt, req);
}

/// Spray derivative S(f) = xdot^a d_a f - 2 G^a d.a f of a scalar field on
/// the tangent bundle. `f` is a generic callable (x, v) -> scalar.
template <class F>
double spray_derivative(const OracleEval& ev, const TangentPoint& pt, const F& f) {
  std::array<Jet8_1, 4> X, V;
  for (int a = 0; a < 4; ++a) {
    X[a] = Jet8_1::variable(a, pt.x[a]);
    V[a] = Jet8_1::variable(4 + a, pt.v[a]);
  }
  const Jet8_1 fj = f(X, V);
  double acc = 0;
  for (int a = 0; a < 4; ++a) acc += pt.v[a] * fj.coeff(1 + a) - 2.0 * ev.G[a] * fj.coeff(5 + a);
  return acc;
}

/// Dynamical covariant derivative of a covariant tensor field of rank 1 or 3,
/// given as a generic callable (x, v) -> std::vector of 4^rank flattened
/// components (index order [a][b][c], last index fastest).
template <class F>
std::vector<double> dynamical_derivative(const OracleEval& ev, const TangentPoint& pt, int rank, const F& field) {
  std::array<Jet8_1, 4> X, V;
  for (int a = 0; a < 4; ++a) {
    X[a] = Jet8_1::variable(a, pt.x[a]);
    V[a] = Jet8_1::variable(4 + a, pt.v[a]);
  }
  const std::vector<Jet8_1> comps = field(X, V);
  const std::size_t n = comps.size();
  auto flat = [rank](const std::array<int, 3>& idx) {
    std::size_t f = 0;
    for (int i = 0; i < rank; ++i) f = f * 4 + static_cast<std::size_t>(idx[i]);
    return f;
  };
  std::vector<double> out(n, 0.0);
  for (std::size_t f = 0; f < n; ++f) {
    std::array<int, 3> idx{};
    std::size_t rem = f;
    for (int i = rank - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(rem % 4);
      rem /= 4;
    }
    double acc = 0;
    for (int d = 0; d < 4; ++d) {
      double delta = comps[f].coeff(1 + d);
      for (int e = 0; e < 4; ++e) delta -= ev.N[e][d] * comps[f].coeff(5 + e);
      acc += pt.v[d] * delta;
      for (int slot = 0; slot < rank; ++slot)
        for (int e = 0; e < 4; ++e) {
          auto j = idx;
          j[slot] = e;
          acc -= pt.v[d] * ev.chern_rund[e][d][idx[slot]] * comps[flat(j)].value();
        }
    }
    out[f] = acc;
  }
  return out;
}

/// The six Killing fields of spatial homogeneity and isotropy in (t, r, theta, phi).
template <class S>
std::array<std::array<S, 4>, 6> cosmological_killing_fields(const std::array<S, 4>& x, double k) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const S& r = x[1];
  const S& th = x[2];
  const S& ph = x[3];
  const S chi = sqrt(1.0 - k * r * r);
  const S st = sin(th), ct = cos(th), sp = sin(ph), cp = cos(ph);
  const S zero(0.0);
  std::array<std::array<S, 4>, 6> X;
  X[0] = {zero, chi * st * cp, chi / r * ct * cp, -(chi / r) * sp / st};
  X[1] = {zero, chi * st * sp, chi / r * ct * sp, (chi / r) * cp / st};
  X[2] = {zero, chi * ct, -(chi / r) * st, zero};
  X[3] = {zero, zero, sp, ct / st * cp};
  X[4] = {zero, zero, -cp, ct / st * sp};
  X[5] = {zero, zero, zero, S(1.0)};
  return X;
}

struct KillingResidual {
  std::array<double, 6> raw{};
  std::array<double, 6> relative{};  // raw / |L|
};

/// Complete-lift derivatives X^C_I(L) = xi^a d_a L + xdot^c d_c xi^a d.a L.
inline KillingResidual killing_residual(const Lagrangian& lag, const TangentPoint& pt, double k) {
  if (!(pt.r() > 0)) throw DomainError("killing_residual: coordinate singularity at r = 0");
  if (std::abs(std::sin(pt.theta())) < 1e-12) throw DomainError("killing_residual: coordinate singularity at theta in {0, pi}");
  if (!(1.0 - k * pt.r() * pt.r() > 0)) throw DomainError("killing_residual: chi = sqrt(1 - k r^2) undefined");

  std::array<Jet8_1, 4> X, V;
  for (int a = 0; a < 4; ++a) {
    X[a] = Jet8_1::variable(a, pt.x[a]);
    V[a] = Jet8_1::variable(4 + a, pt.v[a]);
  }
  const Jet8_1 Lj = lag(X, V);
  const double Lval = Lj.value();

  using J4 = Jet<4, 1>;
  std::array<J4, 4> xs;
  for (int a = 0; a < 4; ++a) xs[a] = J4::variable(a, pt.x[a]);
  const auto fields = cosmological_killing_fields(xs, k);

  KillingResidual res;
  for (int I = 0; I < 6; ++I) {
    double acc = 0;
    for (int a = 0; a < 4; ++a) {
      const J4& xi = fields[I][a];
      double lift = 0;
      for (int c = 0; c < 4; ++c) lift += pt.v[c] * xi.coeff(1 + c);
      acc += xi.value() * Lj.coeff(1 + a) + lift * Lj.coeff(5 + a);
    }
    res.raw[I] = acc;
    res.relative[I] = std::abs(Lval) > 0 ? std::abs(acc) / std::abs(Lval) : std::abs(acc);
  }
  return res;
}

}  // namespace cosmofinsler
