#pragma once

// Evidence-based placement of a profile on the ladder
// pseudo-Riemannian < Berwald < Landsberg < general Finsler.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "cosmofinsler/cosmo_geometry.hpp"
#include "cosmofinsler/errors.hpp"
#include "cosmofinsler/oracle.hpp"
#include "cosmofinsler/profiles.hpp"
#include "cosmofinsler/sampling.hpp"

namespace cosmofinsler {

enum class Ladder { degenerate, pseudo_riemannian, berwald, landsberg_non_berwald, general_finsler };

inline const char* ladder_name(Ladder l) {
  switch (l) {
    case Ladder::degenerate: return "Degenerate";
    case Ladder::pseudo_riemannian: return "PseudoRiemannian";
    case Ladder::berwald: return "Berwald";
    case Ladder::landsberg_non_berwald: return "LandsbergNonBerwald";
    case Ladder::general_finsler: return "GeneralFinsler";
  }
  return "";
}

struct ClassifyThresholds {
  /// A quantity vanishes when its relative size stays below this on every point.
  double vanish = 1e-7;
  /// A quantity is non-vanishing when it exceeds this on at least `fraction` of the points.
  double nonvanish = 1e-3;
  double fraction = 0.1;
};

/// Maximum, minimum and the fraction of points above the non-vanishing threshold.
struct Statistic {
  double max = 0;
  double min = 0;
  double fraction_large = 0;
  bool vanishes = false;
  bool nonvanishing = false;
};

struct Evidence {
  std::size_t points = 0;
  std::size_t degenerate_points = 0;
  Statistic hessian;    // |h''| s^2 / max(|h|, |s h'|)
  Statistic cartan;     // max|C| |tdot| / max|g|
  Statistic berwald;    // max|d.d.d.G| |tdot| / max|d.d.G|
  Statistic landsberg;  // max|P| / largest summand of P
  double max_landsberg_trace = 0;  // max|P_a| / largest summand of P
  std::array<Statistic, 6> branch{};
};

struct ClassLabel {
  Ladder ladder = Ladder::general_finsler;
  std::vector<int> branches;
  Evidence evidence;
  ClassifyThresholds thresholds;
  /// Notes on borderline evidence, empty when every test was decisive.
  std::vector<std::string> notes;
};

namespace detail {

inline Statistic summarize(const std::vector<double>& v, const ClassifyThresholds& th) {
  Statistic s;
  if (v.empty()) return s;
  s.max = *std::max_element(v.begin(), v.end());
  s.min = *std::min_element(v.begin(), v.end());
  const auto large = std::count_if(v.begin(), v.end(), [&](double x) { return x > th.nonvanish; });
  s.fraction_large = static_cast<double>(large) / static_cast<double>(v.size());
  s.vanishes = s.max < th.vanish;
  s.nonvanishing = s.fraction_large >= th.fraction;
  return s;
}

}  // namespace detail

/// Samples the profile, measures Cartan, Berwald and Landsberg tensors and the
/// branch factors, and assigns the most specific consistent ladder position.
inline ClassLabel classify_profile(const Profile& profile, const SampleSpec& sampling = {},
                                   const ClassifyThresholds& th = {}) {
  ClassLabel label;
  label.thresholds = th;
  auto& ev = label.evidence;

  // Degeneracy is probed on points that may sit on the h'' = 0 locus.
  SampleSpec raw = sampling;
  raw.keep_degenerate = true;
  const auto raw_points = sample_points(profile, raw);
  if (raw_points.empty()) throw ConfigError(std::string(profile.name()) + ": no valid sample points in the configured grid");
  std::vector<double> hess;
  std::array<std::vector<double>, 6> branch;
  for (const auto& p : raw_points) {
    const auto e = metric_eval(profile, p);
    hess.push_back(hessian_relative(e.jet));
    for (int b = 0; b < 6; ++b) branch[b].push_back(e.branches.branch(b + 1).relative());
  }
  ev.hessian = detail::summarize(hess, th);
  for (int b = 0; b < 6; ++b) {
    ev.branch[b] = detail::summarize(branch[b], th);
    if (ev.branch[b].vanishes) label.branches.push_back(b + 1);
  }
  ev.degenerate_points = static_cast<std::size_t>(std::count_if(hess.begin(), hess.end(), [&](double x) { return x < th.vanish; }));
  if (ev.hessian.vanishes) {
    ev.points = raw_points.size();
    label.ladder = Ladder::degenerate;
    return label;
  }

  const auto points = sample_points(profile, sampling);
  if (points.empty()) throw ConfigError(std::string(profile.name()) + ": no valid sample points away from singular loci");
  ev.points = points.size();
  const auto lag = lagrangian_from_profile(profile);
  OracleRequest req;
  req.berwald = true;
  req.curvature = false;
  std::vector<double> cartan, berwald, landsberg;
  for (const auto& p : points) {
    const auto e = geometry_eval(profile, p, Level::landsberg);
    const auto o = oracle_eval(lag, p, req);
    const double td = std::abs(p.v[0]);
    cartan.push_back(max_abs(e.C) * td / max_abs(e.g));
    berwald.push_back(o.spray_hessian_max > 0 ? o.berwald_indicator * td / o.spray_hessian_max : o.berwald_indicator);
    landsberg.push_back(e.landsberg_relative());
    if (o.landsberg_scale > 0) ev.max_landsberg_trace = std::max(ev.max_landsberg_trace, max_abs(o.P_trace) / o.landsberg_scale);
  }
  ev.cartan = detail::summarize(cartan, th);
  ev.berwald = detail::summarize(berwald, th);
  ev.landsberg = detail::summarize(landsberg, th);

  if (ev.cartan.vanishes) {
    label.ladder = Ladder::pseudo_riemannian;
  } else if (ev.berwald.vanishes) {
    label.ladder = Ladder::berwald;
  } else if (ev.landsberg.vanishes) {
    label.ladder = Ladder::landsberg_non_berwald;
    if (!ev.berwald.nonvanishing) label.notes.push_back("Berwald indicator neither vanishes nor is large on enough points");
  } else {
    label.ladder = Ladder::general_finsler;
    if (!ev.landsberg.nonvanishing) label.notes.push_back("Landsberg tensor neither vanishes nor is large on enough points");
  }
  if (!ev.cartan.vanishes && !ev.cartan.nonvanishing) label.notes.push_back("Cartan tensor evidence is borderline");
  return label;
}

}  // namespace cosmofinsler
