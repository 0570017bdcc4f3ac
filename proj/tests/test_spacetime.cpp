#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace cosmofinsler;
using fixtures::SF;

TEST(Spacetime, NullRootsOfUnicornFlrw) {
  const auto r1 = null_directions(unicorn_flrw(-1.0, SF::constant(2.0), 0), 1.0);
  ASSERT_EQ(r1.null_roots.size(), 2u);
  EXPECT_NEAR(r1.null_roots[0], -0.5, 1e-12);
  EXPECT_NEAR(r1.null_roots[1], 0.5, 1e-12);
  ASSERT_TRUE(r1.asymmetry.has_value());
  EXPECT_LT(*r1.asymmetry, 1e-12);

  const auto r2 = null_directions(unicorn_flrw(-2.0, SF::constant(1.0), 0), 1.0);
  ASSERT_EQ(r2.null_roots.size(), 2u);
  EXPECT_NEAR(r2.null_roots[0], -2.0, 1e-12);
  EXPECT_NEAR(r2.null_roots[1], 1.0, 1e-12);
  ASSERT_EQ(r2.closed_form_roots.size(), 2u);
  EXPECT_NEAR(*r2.asymmetry, 1.0, 1e-12);
}

TEST(Spacetime, ConeAsymmetryVanishesOnlyAtMinusOne) {
  for (double f : {-4.0, -2.0, -1.5, -1.0, -0.7, -0.3}) {
    const auto r = null_directions(unicorn_flrw(f, SF::constant(1.3), 0), 0.5);
    ASSERT_TRUE(r.asymmetry.has_value()) << f;
    if (f == -1.0)
      EXPECT_LT(*r.asymmetry, 1e-12);
    else
      EXPECT_GT(*r.asymmetry, 1e-3) << f;
  }
}

TEST(Spacetime, FlrwConeAndSignature) {
  const auto p = fixtures::flrw();
  const double t = 1.0, a = std::exp(0.1);
  const auto rep = cone_report(p, t);
  ASSERT_EQ(rep.null_roots.size(), 2u);
  EXPECT_NEAR(rep.null_roots[0], -1.0 / a, 1e-12);
  EXPECT_NEAR(rep.null_roots[1], 1.0 / a, 1e-12);
  EXPECT_TRUE(rep.det_negative_everywhere);
  bool saw_inside = false;
  for (const auto& smp : rep.samples)
    if (std::abs(smp.s) < 0.9 / a && std::abs(smp.s) > 1e-3) {
      saw_inside = true;
      EXPECT_EQ(smp.pattern, "(+,-,-,-)") << smp.s;
      EXPECT_TRUE(smp.lorentzian());
    }
  EXPECT_TRUE(saw_inside);
  EXPECT_EQ(rep.convexity.violations, 0u);
}

TEST(Spacetime, UnicornFlrwCones) {
  const auto p = unicorn_flrw(-2.0, SF::constant(1.0), 0);
  const auto rep = cone_report(p, 1.0);
  EXPECT_TRUE(rep.det_negative_everywhere);
  ASSERT_FALSE(rep.lorentzian.empty());
  EXPECT_LT(rep.lorentzian.front().lo, -1.9);
  EXPECT_GT(rep.lorentzian.back().hi, 0.9);
  EXPECT_GT(rep.convexity.checks, 0u);
  EXPECT_EQ(rep.convexity.violations, 0u);
  EXPECT_TRUE(rep.convexity.L_positive_inside);
}

TEST(Spacetime, SignatureDeterminantsAgree) {
  for (const auto& [label, p] : fixtures::unicorns()) {
    const auto rep = cone_report(p, 1.0, 100);
    for (const auto& smp : rep.samples) {
      if (smp.pattern == "undefined") continue;
      const double scale = std::max(std::abs(smp.det_g_direct), std::abs(smp.det_g_factored));
      EXPECT_LE(std::abs(smp.det_g_direct - smp.det_g_factored), 1e-8 * scale) << label << " s=" << smp.s;
    }
  }
}

TEST(Spacetime, UnicornsWithoutLightCones) {
  for (const auto& p : {fixtures::unicorn_l1(), fixtures::unicorn_l3()}) {
    const auto rep = cone_report(p, 1.0);
    EXPECT_TRUE(rep.null_roots.empty());
    ASSERT_FALSE(rep.warnings.empty());
    EXPECT_NE(rep.warnings[0].find("no null directions"), std::string::npos);
    EXPECT_FALSE(rep.asymmetry.has_value());
  }
  EXPECT_TRUE(cone_report(fixtures::unicorn_l3(), 1.0).det_positive_everywhere);
}

TEST(Spacetime, ConformalUnicornRequiresOppositeSlopes) {
  EXPECT_THROW(unicorn_l2_conformal(1.0, 2.0, SF::power_law(1, 1), 0), ParameterError);
  EXPECT_THROW(unicorn_l2_conformal(0.0, 2.0, SF::power_law(1, 1), 0), ParameterError);
  EXPECT_NO_THROW(unicorn_l2_conformal(-2.0, 1.0, SF::power_law(1, 1), 0));
}

TEST(Spacetime, SpecializedSprayMatchesOracle) {
  const std::vector<Profile> profiles = {
      fixtures::flrw(), fixtures::unicorn_flrw_fixture(), unicorn_flrw(-0.5, SF::power_law(1, 0.6), -0.4),
      make_profile(Family::unicorn_l2, {{"d1", -2.0}}, {{"s2", SF::constant(1.0)}, {"c3", SF::power_law(0.2, 1)}}, 0.3)};
  for (const auto& p : profiles) {
    const auto lag = lagrangian_from_profile(p);
    for (const auto& pt : fixtures::points(p, 30)) {
      const auto G = specialized_spray(p, pt);
      ASSERT_TRUE(G.has_value()) << p.name();
      OracleRequest req;
      req.landsberg = req.curvature = false;
      const auto o = oracle_eval(lag, pt, req);
      const double scale = std::max(max_abs(o.G), max_abs(o.N) * max_abs(pt.v));
      for (int a = 0; a < 4; ++a) EXPECT_LE(std::abs((*G)[a] - o.G[a]), 1e-10 * scale) << p.name();
    }
  }
  EXPECT_FALSE(specialized_spray(fixtures::unicorn_l2(), fixtures::points(fixtures::unicorn_l2(), 1)[0]).has_value());
  EXPECT_FALSE(specialized_spray(fixtures::unicorn_l3(), fixtures::points(fixtures::unicorn_l3(), 1)[0]).has_value());
}

TEST(Spacetime, SpecializedSprayIsFiniteOnApproachToTheCone) {
  const auto p = unicorn_flrw(-2.0, SF::exponential(1, 0.1), 0);
  const double t = 1.0;
  const auto roots = null_directions(p, t).null_roots;
  ASSERT_EQ(roots.size(), 2u);
  for (double root : roots)
    for (double eps : {1e-4, 1e-6, 1e-8}) {
      const double s = root * (1 - eps);
      const auto G = specialized_spray(p, cone_vector(p, t, s));
      ASSERT_TRUE(G.has_value());
      for (double g : *G) EXPECT_TRUE(std::isfinite(g));
      EXPECT_LT(max_abs(*G), 1e3);
    }
}

TEST(Spacetime, ConvexityOfFutureCone) {
  const auto p = fixtures::unicorn_flrw_fixture();
  const auto roots = null_directions(p, 1.0).null_roots;
  ASSERT_EQ(roots.size(), 2u);
  const auto rep = convexity_check(p, 1.0, Interval{1e-3, roots[1] * (1 - 1e-6)}, 500, 5);
  EXPECT_EQ(rep.checks, 500u);
  EXPECT_EQ(rep.violations, 0u);
  EXPECT_GE(rep.worst_margin, -1e-12);
}
