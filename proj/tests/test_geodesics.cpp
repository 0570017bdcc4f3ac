#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"

using namespace cosmofinsler;
using fixtures::SF;

namespace {

Vec4 cartesian(const GeodesicState& s) {
  const double r = s.x[1], th = s.x[2], ph = s.x[3];
  return {s.x[0], r * std::sin(th) * std::cos(ph), r * std::sin(th) * std::sin(ph), r * std::cos(th)};
}

const Vec4 kX0{1, 0.7, 1.1, 0.4};
const Vec4 kV0{1, 0.2, 0.1, 0.05};

}  // namespace

TEST(Geodesics, MinkowskiGeodesicsAreStraightLines) {
  const auto mk = unicorn_flrw(-1.0, SF::constant(1.0), 0);
  const auto tr = integrate_geodesic(mk, {0, 1, M_PI / 2, 0}, {1, 0.3, 0, 0.2}, 10);
  ASSERT_EQ(tr.status, GeodesicStatus::completed);
  const auto c0 = cartesian(tr.states.front());
  // Initial Cartesian velocity: (1, rdot, r phidot, 0) at (r, theta, phi) = (1, pi/2, 0).
  const Vec4 u{1, 0.3, 0.2, 0};
  double err = 0;
  for (const auto& s : tr.states) {
    const auto c = cartesian(s);
    for (int i = 0; i < 4; ++i) err = std::max(err, std::abs(c[i] - (c0[i] + s.lambda * u[i])));
  }
  EXPECT_LT(err, 1e-8);
  EXPECT_NEAR(tr.states.back().lambda, 10.0, 1e-12);
}

TEST(Geodesics, ComovingObserverProperTimeIsCosmicTime) {
  const auto tr = integrate_geodesic(fixtures::flrw(), {1, 0.5, 1, 0.2}, {1, 0, 0, 0}, 5);
  ASSERT_EQ(tr.status, GeodesicStatus::completed);
  const auto& e = tr.states.back();
  EXPECT_NEAR(e.x[0] - 1.0, 5.0, 1e-12);
  EXPECT_NEAR(e.tau, 5.0, 1e-12);
  EXPECT_NEAR(e.x[1], 0.5, 1e-14);
  EXPECT_LT(tr.max_L_drift, 1e-12);
}

TEST(Geodesics, LagrangianIsConservedOnUnicornFlrw) {
  const auto p = fixtures::unicorn_flrw_fixture();
  for (auto src : {SpraySource::specialized, SpraySource::closed_form, SpraySource::oracle}) {
    GeodesicOptions o;
    o.source = src;
    const auto tr = integrate_geodesic(p, kX0, kV0, 10, o);
    EXPECT_EQ(tr.status, GeodesicStatus::completed) << spray_source_name(src);
    EXPECT_LT(tr.max_L_drift, 1e-8) << spray_source_name(src);
  }
}

TEST(Geodesics, SpraySourcesAgree) {
  const auto p = fixtures::unicorn_flrw_fixture();
  GeodesicOptions a, b;
  a.source = SpraySource::specialized;
  b.source = SpraySource::oracle;
  const auto ta = integrate_geodesic(p, kX0, kV0, 5, a), tb = integrate_geodesic(p, kX0, kV0, 5, b);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(ta.states.back().x[i], tb.states.back().x[i], 1e-8);
    EXPECT_NEAR(ta.states.back().v[i], tb.states.back().v[i], 1e-8);
  }
}

TEST(Geodesics, DriftShrinksWithTolerance) {
  const auto p = unicorn_flrw(-2.0, SF::exponential(1, 0.1), 0);
  std::vector<double> drift;
  for (double tol : {1e-4, 1e-6, 1e-8}) {
    GeodesicOptions o;
    o.rel_tol = o.abs_tol = tol;
    o.max_step = 10;
    drift.push_back(integrate_geodesic(p, kX0, kV0, 10, o).max_L_drift);
  }
  EXPECT_LT(drift[1], drift[0] / 20);
  EXPECT_LT(drift[2], drift[1] / 20);
}

TEST(Geodesics, AffineReparameterization) {
  const auto p = fixtures::unicorn_flrw_fixture();
  const auto a = integrate_geodesic(p, kX0, kV0, 4);
  Vec4 v2 = kV0;
  for (auto& c : v2) c *= 2;
  const auto b = integrate_geodesic(p, kX0, v2, 2);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(a.states.back().x[i], b.states.back().x[i], 1e-9);
    EXPECT_NEAR(2 * a.states.back().v[i], b.states.back().v[i], 1e-9);
  }
  EXPECT_NEAR(a.states.back().tau, b.states.back().tau, 1e-9);
}

TEST(Geodesics, NullGeodesicStaysOnTheCone) {
  const double f = -0.5, t0 = 1.0, a = std::exp(0.1 * t0);
  const auto p = unicorn_flrw(f, SF::exponential(1, 0.1), 0);
  // Radial data with s = w / tdot = 1 / a, a root of the null function.
  const auto tr = integrate_geodesic(p, {t0, 0.7, 1.1, 0.4}, {1, 1.0 / a, 0, 0}, 10);
  ASSERT_EQ(tr.status, GeodesicStatus::completed);
  EXPECT_NEAR(tr.L0, 0.0, 1e-14);
  double worst = 0;
  for (const auto& s : tr.states) {
    const double n = p.null_function(s.x[0], std::abs(s.v[1]) / s.v[0]);
    worst = std::max(worst, std::sqrt(std::abs(n)));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Geodesics, SingularApproachIsMarked) {
  const auto p = make_profile(Family::flrw, {}, {{"a", SF::power_law(1, 0.5)}}, 0);
  const auto tr = integrate_geodesic(p, {1, 0.5, 1, 0.2}, {-1, 0.3, 0, 0}, 5);
  EXPECT_EQ(tr.status, GeodesicStatus::singular_approach);
  EXPECT_FALSE(tr.locus.empty());
  EXPECT_GT(tr.states.back().x[0], 0.0);
  EXPECT_LT(tr.states.back().x[0], 0.1);
}

TEST(Geodesics, InvalidOptionsAndData) {
  const auto p = fixtures::flrw();
  EXPECT_THROW(integrate_geodesic(p, kX0, kV0, 0), ConfigError);
  GeodesicOptions o;
  o.rel_tol = 0;
  EXPECT_THROW(integrate_geodesic(p, kX0, kV0, 1, o), ConfigError);
  EXPECT_THROW(integrate_geodesic(p, {1, -0.5, 1, 0}, kV0, 1), DomainError);
  GeodesicOptions spec;
  spec.source = SpraySource::specialized;
  EXPECT_THROW(integrate_geodesic(fixtures::unicorn_l3(), kX0, kV0, 1, spec), DomainError);
  EXPECT_EQ(spray_source_from_name("oracle"), SpraySource::oracle);
  EXPECT_THROW(spray_source_from_name("magic"), ConfigError);
}

TEST(Geodesics, CsvOutput) {
  const auto tr = integrate_geodesic(fixtures::flrw(), {1, 0.5, 1, 0.2}, {1, 0, 0, 0}, 0.5);
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "lambda,t,r,theta,phi,tdot,rdot,thetadot,phidot,L,tau");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 10);
  }
  EXPECT_EQ(rows, tr.states.size());
}
