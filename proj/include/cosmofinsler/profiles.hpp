#pragma once

// Cosmological Finsler Lagrangians L = tdot^2 h(t, s)^2 with s = w / tdot.
//
// A Profile is one of the closed-form families that appear in the Landsberg
// classification (plus FLRW, stationary and a black-box Custom family). The
// profile function h is a template over the scalar type so the same closed
// form is evaluated on doubles and on Taylor jets.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cosmofinsler/errors.hpp"
#include "cosmofinsler/jet.hpp"
#include "cosmofinsler/scale_function.hpp"

namespace cosmofinsler {

/// Jet types every black-box callable must accept.
using Jet2 = Jet<2, 4>;
using Jet8_1 = Jet<8, 1>;
using Jet8_4 = Jet<8, 4>;
using Jet8_5 = Jet<8, 5>;

/// Type-erased generic callable, instantiated once per scalar type.
template <template <class> class Signature, class... Scalars>
class ScalarOverloadSet {
 public:
  ScalarOverloadSet() = default;
  template <class F>
  explicit ScalarOverloadSet(const F& f) : fns_(std::function<Signature<Scalars>>(f)...) {}

  template <class S, class... Args>
  S call(Args&&... args) const {
    return std::get<std::function<Signature<S>>>(fns_)(std::forward<Args>(args)...);
  }

  explicit operator bool() const { return static_cast<bool>(std::get<0>(fns_)); }

 private:
  std::tuple<std::function<Signature<Scalars>>...> fns_;
};

template <class S>
using ProfileSignature = S(const S&, const S&);
using ProfileFunction = ScalarOverloadSet<ProfileSignature, double, Jet2, Jet8_1, Jet8_4, Jet8_5>;

enum class Family {
  flrw,
  stationary,
  branch1,
  branch2,
  branch3_degenerate,
  branch4,
  branch5,
  unicorn_l1,
  unicorn_l2,
  unicorn_l3,
  unicorn_flrw,
  custom,
};

/// Open interval (lo, hi); either end may be infinite.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double s) const { return s > lo && s < hi; }
  double width() const { return hi - lo; }
};

struct FamilySchema {
  Family family;
  const char* name;
  std::vector<std::string> params;
  std::vector<std::string> scale_fns;
};

inline const std::vector<FamilySchema>& family_schemas() {
  static const std::vector<FamilySchema> schemas = {
      {Family::flrw, "FLRW", {}, {"a"}},
      {Family::stationary, "Stationary", {"c", "p"}, {}},
      {Family::branch1, "Branch1", {"b", "n"}, {"alpha"}},
      {Family::branch2, "Branch2", {"c1"}, {"c2"}},
      {Family::branch3_degenerate, "Branch3Degenerate", {}, {"c1", "c2"}},
      {Family::branch4, "Branch4", {}, {"c1", "c2"}},
      {Family::branch5, "Branch5", {"c", "p"}, {"e"}},
      {Family::unicorn_l1, "UnicornL1", {"d1"}, {"c2", "c3"}},
      {Family::unicorn_l2, "UnicornL2", {"d1"}, {"s2", "c3"}},
      {Family::unicorn_l3, "UnicornL3", {}, {"c2", "c3"}},
      {Family::unicorn_flrw, "UnicornFLRW", {"f"}, {"a"}},
      {Family::custom, "Custom", {}, {}},
  };
  return schemas;
}

inline const FamilySchema& schema_of(Family f) {
  for (const auto& s : family_schemas())
    if (s.family == f) return s;
  throw ParameterError("unknown family");
}

inline Family family_from_name(const std::string& name) {
  for (const auto& s : family_schemas())
    if (name == s.name) return s.family;
  throw ParameterError("unknown profile family '" + name + "'");
}

inline const char* family_name(Family f) { return schema_of(f).name; }

class Profile;
Profile make_profile(Family family, const std::map<std::string, double>& params,
                     const std::map<std::string, ScaleFunction>& scale_fns, double k);

class Profile {
 public:
  Family family() const { return family_; }
  const char* name() const { return family_name(family_); }
  /// Spatial curvature of the t = const slices.
  double k() const { return k_; }

  double param(const std::string& name) const {
    const auto& sch = schema_of(family_);
    for (std::size_t i = 0; i < sch.params.size(); ++i)
      if (sch.params[i] == name) return params_[i];
    throw ParameterError(std::string(this->name()) + " has no parameter '" + name + "'");
  }
  const ScaleFunction& scale_fn(const std::string& name) const {
    const auto& sch = schema_of(family_);
    for (std::size_t i = 0; i < sch.scale_fns.size(); ++i)
      if (sch.scale_fns[i] == name) return fns_[i];
    throw ParameterError(std::string(this->name()) + " has no scale function '" + name + "'");
  }
  const std::vector<double>& params() const { return params_; }
  const std::vector<ScaleFunction>& scale_fns() const { return fns_; }

  /// Set when the parameters reduce the family to pseudo-Riemannian FLRW.
  bool pseudo_riemannian_degeneration() const { return pseudo_riemannian_; }
  const std::vector<std::string>& flags() const { return flags_; }

  /// The profile function h(t, s).
  template <class S>
  S h(const S& t, const S& s) const;

  /// A continuous function of s whose sign changes mark the null directions
  /// L = 0: the signed extension of L(t, 1, s) where one exists, h otherwise.
  double null_function(double t, double s) const;

  /// Null directions known in closed form (empty if none or not known).
  std::vector<double> closed_form_roots(double t) const;

  /// Open s-intervals on which h is real and finite at time t.
  std::vector<Interval> s_domain(double t) const;

  bool in_domain(double t, double s) const {
    for (const auto& iv : s_domain(t))
      if (iv.contains(s)) return true;
    return false;
  }

  /// Throws DomainError naming the violated constraint.
  void check_domain(double t, double s) const;

  /// Lowest admissible t (0 if some scale function needs t > 0).
  double t_min() const {
    for (const auto& f : fns_)
      if (f.needs_positive_time()) return 0.0;
    return -std::numeric_limits<double>::infinity();
  }

  /// Black-box profile; h must be a generic callable (auto t, auto s) that
  /// works on doubles and on Jet types.
  template <class F>
  static Profile custom(const F& h, std::vector<Interval> domain, double k = 0.0) {
    Profile p;
    p.family_ = Family::custom;
    p.k_ = k;
    p.custom_ = std::make_shared<ProfileFunction>(h);
    p.custom_domain_ = std::move(domain);
    return p;
  }

 private:
  friend Profile make_profile(Family, const std::map<std::string, double>&,
                              const std::map<std::string, ScaleFunction>&, double);

  double p(int i) const { return params_[static_cast<std::size_t>(i)]; }
  const ScaleFunction& fn(int i) const { return fns_[static_cast<std::size_t>(i)]; }
  std::string domain_constraint() const;

  Family family_ = Family::flrw;
  double k_ = 0.0;
  std::vector<double> params_;
  std::vector<ScaleFunction> fns_;
  bool pseudo_riemannian_ = false;
  std::vector<std::string> flags_;
  std::shared_ptr<const ProfileFunction> custom_;
  std::vector<Interval> custom_domain_;
};

namespace detail {

inline bool is_integer(double x) { return std::floor(x) == x; }

// Sign making both factors of a two-root product positive between the roots.
inline double between_roots_sign(double root_a, double root_b) {
  return root_b > root_a ? 1.0 : -1.0;
}

}  // namespace detail

template <class S>
S Profile::h(const S& t, const S& s) const {
  using std::atan;
  using std::exp;
  using std::pow;
  using std::sqrt;
  switch (family_) {
    case Family::flrw: {
      const S a = fn(0)(t);
      return sqrt(1.0 - a * a * s * s);
    }
    case Family::stationary:
      return pow(p(0) + s * s, p(1));
    case Family::branch1:
      return fn(0)(t) + p(0) * pow(s, p(1));
    case Family::branch2:
      return fn(0)(t) * pow(s, p(0));
    case Family::branch3_degenerate:
      return fn(0)(t) + fn(1)(t) * s;
    case Family::branch4:
      return fn(1)(t) * sqrt(s * s + fn(0)(t));
    case Family::branch5: {
      const S e = fn(0)(t);
      const S u = s * e;
      return pow(p(0) + u * u, p(1)) / e;
    }
    case Family::unicorn_l1: {
      const double d1 = p(0);
      const S c2 = fn(0)(t);
      const double sgn = fn(0).sign();
      const double root = std::sqrt(4.0 * d1 - 1.0);
      const S quad = s * s + c2 * s + d1 * c2 * c2;
      return exp(fn(1)(t)) * sqrt(quad) * exp(-(sgn / root) * atan((2.0 * s + c2) / (root * sgn * c2)));
    }
    case Family::unicorn_l2: {
      const double d1 = p(0);
      const S s2 = fn(0)(t);
      const double sig = ((d1 - 1.0) * fn(0).sign() > 0) ? 1.0 : -1.0;
      return exp(fn(1)(t)) * pow(sig * (d1 * s2 - s), d1 / (d1 - 1.0)) * pow(sig * (s - s2), 1.0 / (1.0 - d1));
    }
    case Family::unicorn_l3: {
      const S c2 = fn(0)(t);
      const S x = 2.0 * s + c2;
      return exp(fn(1)(t)) * x * exp(c2 / x);
    }
    case Family::unicorn_flrw: {
      const double f = p(0);
      const S as = fn(0)(t) * s;
      const double sig = (1.0 - f > 0) ? 1.0 : -1.0;
      return pow(sig * (as - f), f / (f - 1.0)) * pow(sig * (1.0 - as), -1.0 / (f - 1.0));
    }
    case Family::custom:
      return custom_->template call<S>(t, s);
  }
  return S(0.0);
}

inline std::vector<Interval> Profile::s_domain(double t) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  // Where s^e is real: everywhere for integer e, s > 0 otherwise.
  auto power_domain = [](double e) -> std::vector<Interval> {
    if (detail::is_integer(e) && e >= 0) return {Interval{}};
    if (detail::is_integer(e)) return {Interval{-inf, 0.0}, Interval{0.0, inf}};
    return {Interval{0.0, inf}};
  };
  // Where c + q s^2 > 0, raised to the power e.
  auto quadratic_domain = [](double c, double q, double e) -> std::vector<Interval> {
    if (detail::is_integer(e) && e >= 0) return {Interval{}};
    if (c > 0) return {Interval{}};
    if (q <= 0) return {};
    const double r = std::sqrt(-c / q);
    return {Interval{-inf, -r}, Interval{r, inf}};
  };
  switch (family_) {
    case Family::flrw: {
      const double a = fn(0)(t);
      return {Interval{-1.0 / a, 1.0 / a}};
    }
    case Family::stationary:
      return quadratic_domain(p(0), 1.0, p(1));
    case Family::branch1:
      return power_domain(p(1));
    case Family::branch2:
      return power_domain(p(0));
    case Family::branch3_degenerate:
      return {Interval{}};
    case Family::branch4:
      return quadratic_domain(fn(0)(t), 1.0, 0.5);
    case Family::branch5: {
      const double e = fn(0)(t);
      return quadratic_domain(p(0), e * e, p(1));
    }
    case Family::unicorn_l1:
      return {Interval{}};
    case Family::unicorn_l2: {
      const double s2 = fn(0)(t), d1 = p(0);
      return {Interval{std::min(s2, d1 * s2), std::max(s2, d1 * s2)}};
    }
    case Family::unicorn_l3: {
      const double x0 = -0.5 * fn(0)(t);
      return {Interval{-inf, x0}, Interval{x0, inf}};
    }
    case Family::unicorn_flrw: {
      const double a = fn(0)(t), f = p(0);
      return {Interval{std::min(f / a, 1.0 / a), std::max(f / a, 1.0 / a)}};
    }
    case Family::custom:
      return custom_domain_;
  }
  return {};
}

inline std::string Profile::domain_constraint() const {
  switch (family_) {
    case Family::flrw:
      return "1 - a(t)^2 s^2 > 0";
    case Family::stationary:
      return "c + s^2 > 0";
    case Family::branch1:
    case Family::branch2:
      return "s^exponent real (s > 0 for non-integer exponent)";
    case Family::branch3_degenerate:
    case Family::unicorn_l1:
      return "finite h";
    case Family::branch4:
      return "s^2 + c1(t) > 0";
    case Family::branch5:
      return "c + (s e(t))^2 > 0";
    case Family::unicorn_l2:
      return "s strictly between s2(t) and d1 s2(t)";
    case Family::unicorn_l3:
      return "2 s + c2(t) != 0";
    case Family::unicorn_flrw:
      return "s strictly between f / a(t) and 1 / a(t)";
    case Family::custom:
      return "s inside the declared custom domain";
  }
  return "";
}

inline void Profile::check_domain(double t, double s) const {
  const auto& sch = schema_of(family_);
  for (std::size_t i = 0; i < fns_.size(); ++i) fns_[i].check_time(t, sch.scale_fns[i]);
  if (!std::isfinite(s) || !in_domain(t, s)) {
    throw DomainError(std::string(name()) + ": (t, s) = (" + std::to_string(t) + ", " +
                      std::to_string(s) + ") violates " + domain_constraint());
  }
}

inline double Profile::null_function(double t, double s) const {
  auto signed_pow = [](double base, double e) {
    return (base < 0 ? -1.0 : 1.0) * std::pow(std::abs(base), e);
  };
  switch (family_) {
    case Family::flrw: {
      const double a = fn(0)(t);
      return 1.0 - a * a * s * s;
    }
    case Family::unicorn_l2: {
      const double d1 = p(0), s2 = fn(0)(t);
      const double sig = ((d1 - 1.0) * fn(0).sign() > 0) ? 1.0 : -1.0;
      return std::exp(2.0 * fn(1)(t)) * signed_pow(sig * (d1 * s2 - s), 2.0 * d1 / (d1 - 1.0)) *
             signed_pow(sig * (s - s2), 2.0 / (1.0 - d1));
    }
    case Family::unicorn_flrw: {
      const double f = p(0), as = fn(0)(t) * s;
      const double sig = (1.0 - f > 0) ? 1.0 : -1.0;
      return signed_pow(sig * (as - f), 2.0 * f / (f - 1.0)) * signed_pow(sig * (1.0 - as), -2.0 / (f - 1.0));
    }
    case Family::branch4: {
      const double c2 = fn(1)(t);
      return c2 * c2 * (s * s + fn(0)(t));
    }
    case Family::unicorn_l1:
    case Family::unicorn_l3: {
      if (!in_domain(t, s)) return std::numeric_limits<double>::quiet_NaN();
      const double hv = h(t, s);
      return hv * hv;
    }
    default:
      if (!in_domain(t, s)) return std::numeric_limits<double>::quiet_NaN();
      return h(t, s);
  }
}

inline std::vector<double> Profile::closed_form_roots(double t) const {
  switch (family_) {
    case Family::flrw: {
      const double a = fn(0)(t);
      return {-1.0 / a, 1.0 / a};
    }
    case Family::unicorn_flrw: {
      // Each factor vanishes at its root only when its exponent is positive.
      const double a = fn(0)(t), f = p(0);
      std::vector<double> roots;
      if (f / (f - 1.0) > 0) roots.push_back(f / a);
      if (-1.0 / (f - 1.0) > 0) roots.push_back(1.0 / a);
      std::sort(roots.begin(), roots.end());
      return roots;
    }
    case Family::unicorn_l2: {
      const double d1 = p(0), s2 = fn(0)(t);
      std::vector<double> roots;
      if (d1 / (d1 - 1.0) > 0) roots.push_back(d1 * s2);
      if (1.0 / (1.0 - d1) > 0) roots.push_back(s2);
      std::sort(roots.begin(), roots.end());
      return roots;
    }
    default:
      return {};
  }
}

inline Profile make_profile(Family family, const std::map<std::string, double>& params,
                            const std::map<std::string, ScaleFunction>& scale_fns, double k) {
  if (family == Family::custom) {
    throw ParameterError("Custom profiles are built with Profile::custom from a callable");
  }
  const auto& sch = schema_of(family);
  Profile prof;
  prof.family_ = family;
  prof.k_ = k;
  for (const auto& [name, _] : params) {
    if (std::find(sch.params.begin(), sch.params.end(), name) == sch.params.end())
      throw ParameterError(std::string(sch.name) + ": unknown parameter '" + name + "'");
  }
  for (const auto& [name, _] : scale_fns) {
    if (std::find(sch.scale_fns.begin(), sch.scale_fns.end(), name) == sch.scale_fns.end())
      throw ParameterError(std::string(sch.name) + ": unknown scale function '" + name + "'");
  }
  for (const auto& name : sch.params) {
    auto it = params.find(name);
    if (it == params.end()) throw ParameterError(std::string(sch.name) + ": missing parameter '" + name + "'");
    if (!std::isfinite(it->second))
      throw ParameterError(std::string(sch.name) + ": parameter '" + name + "' must be finite");
    prof.params_.push_back(it->second);
  }
  for (const auto& name : sch.scale_fns) {
    auto it = scale_fns.find(name);
    if (it == scale_fns.end())
      throw ParameterError(std::string(sch.name) + ": missing scale function '" + name + "'");
    prof.fns_.push_back(it->second);
  }
  if (!std::isfinite(k)) throw ParameterError("spatial curvature k must be finite");

  auto require = [&](bool ok, const std::string& what) {
    if (!ok) throw ParameterError(std::string(sch.name) + ": requires " + what);
  };
  switch (family) {
    case Family::flrw:
      require(prof.fns_[0].sign() > 0, "a(t) > 0");
      prof.pseudo_riemannian_ = true;
      break;
    case Family::unicorn_l1:
      require(prof.params_[0] > 0.25, "d1 > 1/4");
      require(prof.fns_[0].sign() != 0, "c2(t) != 0");
      break;
    case Family::unicorn_l2:
      require(prof.params_[0] != 1.0, "d1 != 1 (exponent pole)");
      require(prof.fns_[0].sign() != 0, "s2(t) != 0");
      if (prof.params_[0] == -1.0) {
        prof.pseudo_riemannian_ = true;
        prof.flags_.push_back("pseudo-Riemannian degeneration (d1 = -1)");
      }
      break;
    case Family::unicorn_l3:
      require(prof.fns_[0].sign() != 0, "c2(t) != 0");
      break;
    case Family::unicorn_flrw:
      require(prof.params_[0] != 1.0, "f != 1 (exponent pole)");
      require(prof.fns_[0].sign() > 0, "a(t) > 0");
      if (prof.params_[0] == -1.0) {
        prof.pseudo_riemannian_ = true;
        prof.flags_.push_back("pseudo-Riemannian degeneration (f = -1)");
      }
      break;
    case Family::branch5:
      require(prof.fns_[0].sign() != 0, "e(t) != 0");
      break;
    default:
      break;
  }
  return prof;
}

/// Values of h and its s- and mixed t-derivatives at one point.
struct ProfileJet {
  double t = 0, s = 0;
  double h = 0;
  double hs1 = 0, hs2 = 0, hs3 = 0, hs4 = 0;
  double ht = 0;
  double hts1 = 0, hts2 = 0, hts3 = 0;
};

/// Exact jet of h at (t, s) by truncated Taylor arithmetic on the closed form.
inline ProfileJet eval_jet(const Profile& profile, double t, double s) {
  profile.check_domain(t, s);
  const Jet2 jt = Jet2::variable(0, t);
  const Jet2 js = Jet2::variable(1, s);
  const Jet2 hj = profile.h(jt, js);
  ProfileJet j;
  j.t = t;
  j.s = s;
  j.h = hj.value();
  j.hs1 = hj.partial({0, 1});
  j.hs2 = hj.partial({0, 2});
  j.hs3 = hj.partial({0, 3});
  j.hs4 = hj.partial({0, 4});
  j.ht = hj.partial({1, 0});
  j.hts1 = hj.partial({1, 1});
  j.hts2 = hj.partial({1, 2});
  j.hts3 = hj.partial({1, 3});
  const std::array<double, 10> all{j.h, j.hs1, j.hs2, j.hs3, j.hs4, j.ht, j.hts1, j.hts2, j.hts3, 0.0};
  for (double v : all) {
    if (!std::isfinite(v)) {
      throw DomainError(std::string(profile.name()) + ": non-finite profile jet at (t, s) = (" +
                        std::to_string(t) + ", " + std::to_string(s) + ")");
    }
  }
  return j;
}

/// Profile of the physical unicorn generalisation of FLRW,
/// L = (tdot f - a w)^(2f/(f-1)) (a w - tdot)^(-2/(f-1)).
inline Profile unicorn_flrw(double f, const ScaleFunction& a, double k) {
  return make_profile(Family::unicorn_flrw, {{"f", f}}, {{"a", a}}, k);
}

/// The second unicorn family written in conformal time with constant cone
/// slopes e1, e2: L = etadot^2 e^(2 c3) (e1 - s)^(2e1/(e1-e2)) (s - e2)^(-2e2/(e1-e2)).
/// Only sign patterns with a future and a past cone (e1 e2 < 0) are admitted.
inline Profile unicorn_l2_conformal(double e1, double e2, const ScaleFunction& c3, double k) {
  if (!(e1 * e2 < 0.0)) {
    throw ParameterError("UnicornL2 (conformal): requires e1 e2 < 0 for a future and a past light cone");
  }
  return make_profile(Family::unicorn_l2, {{"d1", e1 / e2}}, {{"s2", ScaleFunction::constant(e2)}, {"c3", c3}}, k);
}

}  // namespace cosmofinsler
