#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace cosmofinsler;
using fixtures::SF;

namespace {

// Richardson-extrapolated central difference of g at x.
template <class G>
double richardson(const G& g, double x, double h) {
  auto c = [&](double d) { return (g(x + d) - g(x - d)) / (2 * d); };
  return (4.0 * c(h / 2) - c(h)) / 3.0;
}

void expect_close(double fd, double exact, double scale, const std::string& what) {
  EXPECT_LE(std::abs(fd - exact), 1e-7 * std::max(std::abs(exact), scale)) << what << ": fd " << fd << " exact " << exact;
}

}  // namespace

TEST(Profiles, FlrwWithUnitScaleFactor) {
  const auto p = make_profile(Family::flrw, {}, {{"a", SF::constant(1)}}, 0);
  EXPECT_NEAR(p.h(0.0, 0.3), std::sqrt(1 - 0.09), 1e-15);
  const auto j = eval_jet(p, 0.0, 0.5);
  EXPECT_NEAR(j.h, 0.8660254, 1e-7);
  EXPECT_NEAR(j.hs1, -0.5773503, 1e-7);
  EXPECT_NEAR(j.hs2, -1.5396007, 1e-7);
  EXPECT_TRUE(p.pseudo_riemannian_degeneration());
}

TEST(Profiles, ParameterConstraints) {
  EXPECT_THROW(fixtures::unicorn_l1(0.1), ParameterError);
  EXPECT_THROW(fixtures::unicorn_l1(0.25), ParameterError);
  EXPECT_THROW(fixtures::unicorn_l2(1.0), ParameterError);
  EXPECT_THROW(unicorn_flrw(1.0, SF::constant(1), 0), ParameterError);
  EXPECT_THROW(unicorn_flrw(-2.0, SF::constant(-1), 0), ParameterError);
  EXPECT_THROW(unicorn_l2_conformal(1.0, 2.0, SF::constant(0), 0), ParameterError);
  EXPECT_THROW(make_profile(Family::flrw, {{"x", 1}}, {{"a", SF::constant(1)}}, 0), ParameterError);
  EXPECT_THROW(make_profile(Family::flrw, {}, {}, 0), ParameterError);
}

TEST(Profiles, DegenerationFlags) {
  const auto l2 = fixtures::unicorn_l2(-1.0);
  EXPECT_TRUE(l2.pseudo_riemannian_degeneration());
  ASSERT_EQ(l2.flags().size(), 1u);
  EXPECT_NE(l2.flags()[0].find("pseudo-Riemannian"), std::string::npos);
  EXPECT_TRUE(unicorn_flrw(-1.0, SF::constant(1), 0).pseudo_riemannian_degeneration());
  EXPECT_FALSE(fixtures::unicorn_l2(2.0).pseudo_riemannian_degeneration());
}

TEST(Profiles, DomainViolationsAreReported) {
  const auto p = fixtures::flrw();
  EXPECT_THROW(eval_jet(p, 1.0, 2.0), DomainError);
  try {
    eval_jet(p, 1.0, 2.0);
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("FLRW"), std::string::npos);
  }
  EXPECT_THROW(eval_jet(fixtures::unicorn_flrw_fixture(), 1.0, 5.0), DomainError);
}

TEST(Profiles, StationaryHasNoTimeDependence) {
  const auto j = eval_jet(make_profile(Family::stationary, {{"c", 1}, {"p", 1}}, {}, 0), 3.0, 1.0);
  EXPECT_DOUBLE_EQ(j.h, 2.0);
  EXPECT_EQ(j.ht, 0.0);
  EXPECT_EQ(j.hts1, 0.0);
  EXPECT_EQ(j.hts2, 0.0);
  EXPECT_EQ(j.hts3, 0.0);
}

TEST(Profiles, Branch1HasNoMixedDerivatives) {
  const auto j = eval_jet(fixtures::branch1(), 1.3, 0.8);
  EXPECT_NE(j.ht, 0.0);
  EXPECT_EQ(j.hts1, 0.0);
  EXPECT_EQ(j.hts2, 0.0);
  EXPECT_EQ(j.hts3, 0.0);
}

TEST(Profiles, Branch4FactorVanishesIdentically) {
  const auto p = make_profile(Family::branch4, {}, {{"c1", SF::constant(1)}, {"c2", SF::constant(1)}}, 0);
  const auto j = eval_jet(p, 1.0, 0.7);
  const double r = j.s * j.hs1 * j.hs1 + j.h * (-j.hs1 + j.s * j.hs2);
  EXPECT_LT(std::abs(r), 1e-12);
}

TEST(Profiles, FlrwSatisfiesPseudoRiemannianIdentity) {
  const auto p = fixtures::flrw();
  for (const auto& pt : fixtures::points(p, 50)) {
    const double s = geometry_eval(p, pt, Level::metric).s;
    const auto j = eval_jet(p, pt.x[0], s);
    const double terms[3] = {s * j.hs1 * j.hs1, -j.h * j.hs1, s * j.h * j.hs2};
    const double scale = std::max({std::abs(terms[0]), std::abs(terms[1]), std::abs(terms[2])});
    EXPECT_LT(std::abs(terms[0] + terms[1] + terms[2]), 1e-10 * scale);
  }
}

TEST(Profiles, UnicornFlrwMinusOneIsFlrw) {
  const auto p = unicorn_flrw(-1.0, SF::constant(1.0), 0);
  for (double s : {-0.9, -0.3, 0.2, 0.8}) {
    const double h = p.h(1.0, s);
    EXPECT_NEAR(h * h, 1 - s * s, 1e-14);
  }
}

TEST(Profiles, ClosedFormRoots) {
  const auto p = unicorn_flrw(-1.0, SF::constant(2.0), 0);
  const auto r = p.closed_form_roots(3.0);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_DOUBLE_EQ(r[0], -0.5);
  EXPECT_DOUBLE_EQ(r[1], 0.5);
  EXPECT_TRUE(fixtures::unicorn_l1().closed_form_roots(1.0).empty());
}

TEST(Profiles, ScaleFunctions) {
  const auto pw = SF::power_law(2.0, 0.5);
  EXPECT_NEAR(pw(4.0), 4.0, 1e-15);
  EXPECT_NEAR(pw.derivative(4.0), 0.5, 1e-15);
  EXPECT_TRUE(pw.needs_positive_time());
  const auto ex = SF::exponential(3.0, -0.2);
  EXPECT_NEAR(ex.derivative(1.0), -0.6 * std::exp(-0.2), 1e-15);
  EXPECT_EQ(SF::constant(5.0).derivative(2.0), 0.0);
}

// Every jet entry against a Richardson difference of the entry one order lower.
TEST(Profiles, JetsMatchRichardsonDifferences) {
  auto all = fixtures::builtin();
  all.push_back({"Custom", fixtures::generic_custom()});
  for (const auto& [label, p] : all) {
    SampleSpec spec;
    spec.count = 10;
    spec.seed = 3;
    spec.end_margin = 0.1;
    for (const auto& pt : sample_points(p, spec)) {
      const double t = pt.x[0], s = geometry_eval(p, pt, Level::metric).s;
      const auto j = eval_jet(p, t, s);
      const double hs = 1e-3 * std::max(1.0, std::abs(s)), ht = 1e-3;
      auto S = [&](auto get) { return [&, get](double x) { return get(eval_jet(p, t, x)); }; };
      auto T = [&](auto get) { return [&, get](double x) { return get(eval_jet(p, x, s)); }; };
      const double sc = std::abs(j.h) / std::max(1.0, std::abs(s));
      expect_close(richardson(S([](const ProfileJet& q) { return q.h; }), s, hs), j.hs1, sc, label + " hs1");
      expect_close(richardson(S([](const ProfileJet& q) { return q.hs1; }), s, hs), j.hs2, sc, label + " hs2");
      expect_close(richardson(S([](const ProfileJet& q) { return q.hs2; }), s, hs), j.hs3, sc, label + " hs3");
      expect_close(richardson(S([](const ProfileJet& q) { return q.hs3; }), s, hs), j.hs4, sc, label + " hs4");
      expect_close(richardson(T([](const ProfileJet& q) { return q.h; }), t, ht), j.ht, sc, label + " ht");
      expect_close(richardson(S([](const ProfileJet& q) { return q.ht; }), s, hs), j.hts1, sc, label + " hts1");
      expect_close(richardson(S([](const ProfileJet& q) { return q.hts1; }), s, hs), j.hts2, sc, label + " hts2");
      expect_close(richardson(S([](const ProfileJet& q) { return q.hts2; }), s, hs), j.hts3, sc, label + " hts3");
    }
  }
}

TEST(Profiles, CustomProfileUsesDeclaredDomain) {
  const auto p = fixtures::generic_custom();
  EXPECT_TRUE(p.in_domain(1.0, 0.5));
  EXPECT_FALSE(p.in_domain(1.0, -2.0));
  EXPECT_THROW(eval_jet(p, 1.0, -2.0), DomainError);
}
