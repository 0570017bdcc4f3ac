#pragma once

#include <string>
#include <vector>

#include "cosmofinsler/cosmofinsler.hpp"

namespace fixtures {

using namespace cosmofinsler;
using SF = ScaleFunction;

struct Named {
  std::string label;
  Profile profile;
};

inline Profile flrw() { return make_profile(Family::flrw, {}, {{"a", SF::exponential(1, 0.1)}}, 0.3); }
inline Profile stationary() { return make_profile(Family::stationary, {{"c", 1}, {"p", 0.4}}, {}, 0.3); }
inline Profile branch1() {
  return make_profile(Family::branch1, {{"b", 0.7}, {"n", 3}}, {{"alpha", SF::power_law(1, 1)}}, 0.3);
}
inline Profile branch2() { return make_profile(Family::branch2, {{"c1", 0.3}}, {{"c2", SF::exponential(1, 0.2)}}, 0.3); }
inline Profile branch3() {
  return make_profile(Family::branch3_degenerate, {}, {{"c1", SF::exponential(1, 0.2)}, {"c2", SF::power_law(1, 1)}}, 0.3);
}
inline Profile branch4() {
  return make_profile(Family::branch4, {}, {{"c1", SF::exponential(1, 0.3)}, {"c2", SF::power_law(1, 0.5)}}, -0.5);
}
inline Profile branch5() {
  return make_profile(Family::branch5, {{"c", 1}, {"p", 0.3}}, {{"e", SF::exponential(1, 0.2)}}, 0.3);
}
inline Profile unicorn_l1(double d1 = 0.5, double c2 = 1.0) {
  return make_profile(Family::unicorn_l1, {{"d1", d1}}, {{"c2", SF::exponential(c2, 0.3)}, {"c3", SF::power_law(0.2, 1)}}, 0.3);
}
inline Profile unicorn_l2(double d1 = 2.0) {
  return make_profile(Family::unicorn_l2, {{"d1", d1}}, {{"s2", SF::exponential(1, 0.3)}, {"c3", SF::power_law(0.1, 1)}}, 0.3);
}
inline Profile unicorn_l3() {
  return make_profile(Family::unicorn_l3, {}, {{"c2", SF::exponential(1, 0.2)}, {"c3", SF::power_law(0.3, 1)}}, 0.3);
}
inline Profile unicorn_flrw_fixture() { return unicorn_flrw(-2, SF::exponential(1, 0.1), 0.3); }

/// A profile with no special structure: every branch factor is non-zero.
inline Profile generic_custom() {
  return Profile::custom(
      [](auto t, auto s) {
        using std::exp;
        using std::log;
        using std::pow;
        return exp(0.2 * t) * pow(1.0 + s * s, 0.5) * exp(0.1 * t * log(1.0 + s));
      },
      {Interval{-1.0, std::numeric_limits<double>::infinity()}}, 0.3);
}

/// Every built-in family except the degenerate third branch.
inline std::vector<Named> builtin() {
  return {{"FLRW", flrw()},
          {"Stationary", stationary()},
          {"Branch1", branch1()},
          {"Branch2", branch2()},
          {"Branch4", branch4()},
          {"Branch5", branch5()},
          {"UnicornL1_d05", unicorn_l1(0.5, 1.0)},
          {"UnicornL1_d1", unicorn_l1(1.0, -1.0)},
          {"UnicornL2_d2", unicorn_l2(2.0)},
          {"UnicornL2_dm3", unicorn_l2(-3.0)},
          {"UnicornL3", unicorn_l3()},
          {"UnicornFLRW", unicorn_flrw_fixture()}};
}

inline std::vector<Named> unicorns() {
  return {{"UnicornL1_d05", unicorn_l1(0.5, 1.0)}, {"UnicornL1_d1", unicorn_l1(1.0, -1.0)},
          {"UnicornL2_d2", unicorn_l2(2.0)},       {"UnicornL2_dm3", unicorn_l2(-3.0)},
          {"UnicornL3", unicorn_l3()},             {"UnicornFLRW", unicorn_flrw_fixture()}};
}

inline std::vector<TangentPoint> points(const Profile& p, std::size_t n, std::uint64_t seed = 7) {
  SampleSpec spec;
  spec.count = n;
  spec.seed = seed;
  return sample_points(p, spec);
}

}  // namespace fixtures
