#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "fixtures.hpp"

using namespace cosmofinsler;
using fixtures::SF;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::set<std::string> failed;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failed.insert(what);
    }
  }
};

// 1. Closed forms against the oracle.
void oracle_equivalence_criterion(Outcome& out) {
  double worst = 0;
  std::size_t points = 0;
  for (const auto& [label, p] : fixtures::builtin()) {
    const auto pts = fixtures::points(p, 100, 101);
    out.require(pts.size() >= 100, label + " has fewer than 100 points");
    for (const auto& pt : pts) {
      const double r = oracle_equivalence(p, pt).max();
      worst = std::max(worst, r);
      out.require(r < 1e-8, label);
      ++points;
    }
  }
  out.detail << "max relative error " << worst << " over " << points << " points";
}

// 2. Unicorns: Landsberg but not Berwald.
void unicorn_criterion(Outcome& out) {
  OracleRequest req;
  req.berwald = true;
  req.curvature = false;
  double worst_P = 0, worst_fraction = 1;
  for (const auto& [label, p] : fixtures::unicorns()) {
    if (p.family() == Family::unicorn_flrw) continue;
    const auto lag = lagrangian_from_profile(p);
    const auto pts = fixtures::points(p, 100, 202);
    std::size_t large = 0;
    for (const auto& pt : pts) {
      const auto e = geometry_eval(p, pt);
      const auto o = oracle_eval(lag, pt, req);
      worst_P = std::max(worst_P, e.landsberg_relative());
      const double b = o.berwald_indicator * std::abs(pt.v[0]) / o.spray_hessian_max;
      large += b > 1e-3 ? 1 : 0;
      out.require(e.landsberg_relative() < 1e-8, label + " P");
    }
    const double fraction = static_cast<double>(large) / static_cast<double>(pts.size());
    worst_fraction = std::min(worst_fraction, fraction);
    out.require(fraction >= 0.9, label + " Berwald fraction");
  }
  out.detail << "max relative |P| " << worst_P << ", min Berwald fraction " << worst_fraction;
}

// 3. Degenerations to FLRW.
void degeneration_criterion(Outcome& out) {
  double worst_C = 0;
  for (const auto& p : {fixtures::unicorn_l2(-1.0), unicorn_flrw(-1.0, SF::exponential(1, 0.1), 0.3)})
    for (const auto& pt : fixtures::points(p, 100, 303)) {
      const double c = max_abs(geometry_eval(p, pt, Level::cartan).C);
      worst_C = std::max(worst_C, c);
      out.require(c < 1e-10, std::string(p.name()) + " C");
    }
  const auto mk = unicorn_flrw(-1.0, SF::constant(1.0), 0.3);
  const auto lag = lagrangian_from_profile(mk);
  double worst_L = 0;
  for (const auto& pt : fixtures::points(mk, 100, 304)) {
    const double w = spatial_eval({pt.x[1], pt.x[2], pt.x[3], 0.3}, {pt.v[1], pt.v[2], pt.v[3]}, false).w;
    const double L = lag(pt);
    const double r = std::abs(L - (pt.v[0] * pt.v[0] - w * w)) / std::abs(L);
    worst_L = std::max(worst_L, r);
    out.require(r < 1e-12, "Minkowski Lagrangian");
  }
  out.detail << "max|C| " << worst_C << ", max relative Lagrangian deviation " << worst_L;
}

// 4. Branch fixtures and their labels.
void branch_criterion(Outcome& out) {
  struct Case {
    Profile p;
    int branch;
  };
  const std::vector<Case> cases = {{fixtures::branch1(), 1}, {fixtures::branch2(), 2}, {fixtures::branch3(), 3},
                                   {fixtures::branch4(), 4}, {fixtures::branch5(), 5}};
  double worst = 0;
  for (const auto& c : cases) {
    SampleSpec spec;
    spec.count = 100;
    spec.seed = 404;
    spec.keep_degenerate = true;
    for (const auto& pt : sample_points(c.p, spec)) {
      const double r = metric_eval(c.p, pt).branches.branch(c.branch).relative();
      worst = std::max(worst, r);
      out.require(r < 1e-9, std::string(c.p.name()) + " residual");
    }
  }
  const auto custom = fixtures::generic_custom();
  double smallest = std::numeric_limits<double>::infinity();
  for (const auto& pt : fixtures::points(custom, 100, 405)) {
    const auto b = metric_eval(custom, pt).branches;
    for (int i = 1; i <= 6; ++i) smallest = std::min(smallest, b.branch(i).relative());
  }
  out.require(smallest > 1e-3, "Custom factor");
  SampleSpec spec;
  spec.count = 100;
  const auto b2 = classify_profile(fixtures::branch2(), spec).ladder;
  const auto b5 = classify_profile(fixtures::branch5(), spec).ladder;
  const auto b3 = classify_profile(fixtures::branch3(), spec).ladder;
  out.require(b2 == Ladder::berwald, "Branch2 label");
  out.require(b5 == Ladder::berwald, "Branch5 label");
  out.require(b3 == Ladder::degenerate, "Branch3 label");
  out.detail << "max branch residual " << worst << ", min Custom factor " << smallest << ", labels "
             << ladder_name(b2) << "/" << ladder_name(b5) << "/" << ladder_name(b3);
}

// 5. R1 and R2 against P.
void necessary_condition_criterion(Outcome& out) {
  double worst = 0;
  for (const auto& [label, p] : fixtures::unicorns())
    for (const auto& pt : fixtures::points(p, 100, 505)) {
      const auto r = landsberg_residuals(p, pt);
      const double m = std::max(r.R1.relative(), r.R2.relative());
      worst = std::max(worst, m);
      out.require(m < 1e-8, label);
    }
  const auto custom = fixtures::generic_custom();
  double min_R = std::numeric_limits<double>::infinity(), min_P = min_R;
  for (const auto& pt : fixtures::points(custom, 100, 506)) {
    const auto r = landsberg_residuals(custom, pt);
    min_R = std::min(min_R, std::max(r.R1.relative(), r.R2.relative()));
    min_P = std::min(min_P, r.relative_P);
  }
  out.require(min_R > 1e-3, "Custom R");
  out.require(min_P > 1e-3, "Custom P");
  out.detail << "unicorn max R " << worst << ", Custom min R " << min_R << ", min relative P " << min_P;
}

// 6. Light cones.
void causal_criterion(Outcome& out) {
  const auto l1 = cone_report(fixtures::unicorn_l1(), 1.0);
  out.require(l1.null_roots.empty(), "L1 roots");
  const auto l3 = cone_report(fixtures::unicorn_l3(), 1.0);
  out.require(l3.det_positive_everywhere, "L3 det");

  const double a = 1.0;
  const auto uf = unicorn_flrw(-2.0, SF::constant(a), 0);
  const auto rep = cone_report(uf, 1.0);
  out.require(rep.null_roots.size() == 2, "UnicornFLRW root count");
  double root_err = 1;
  if (rep.null_roots.size() == 2)
    root_err = std::max(std::abs(rep.null_roots[0] + 2.0 / a), std::abs(rep.null_roots[1] - 1.0 / a));
  out.require(root_err < 1e-10, "UnicornFLRW roots");
  out.require(rep.det_negative_everywhere, "UnicornFLRW det");
  std::size_t inside = 0;
  for (const auto& smp : rep.samples)
    if (smp.pattern != "undefined" && smp.s > -2.0 / a && smp.s < 1.0 / a) {
      ++inside;
      out.require(smp.pattern == "(+,-,-,-)", "signature at s=" + std::to_string(smp.s));
    }
  out.require(inside > 0, "samples inside the cone");

  std::size_t symmetric = 0;
  bool symmetric_at_minus_one = false;
  for (double f : {-4.0, -3.0, -2.0, -1.5, -1.0, -0.75, -0.5, -0.25}) {
    const auto r = null_directions(unicorn_flrw(f, SF::constant(1.7), 0), 1.0);
    const bool sym = r.asymmetry && *r.asymmetry < 1e-10;
    symmetric += sym ? 1 : 0;
    if (f == -1.0) symmetric_at_minus_one = sym;
  }
  out.require(symmetric == 1 && symmetric_at_minus_one, "asymmetry");
  out.detail << "root error " << root_err << ", " << inside << " Lorentzian samples, symmetric cones only at f=-1";
}

// 7. Factored determinant.
void determinant_criterion(Outcome& out) {
  double worst = 0;
  std::size_t n = 0;
  auto all = fixtures::builtin();
  all.push_back({"Custom", fixtures::generic_custom()});
  for (const auto& [label, p] : all)
    for (const auto& pt : fixtures::points(p, 100, 707)) {
      const double r = determinant_residual(metric_eval(p, pt));
      worst = std::max(worst, r);
      out.require(r < 1e-10, label);
      ++n;
    }
  out.detail << "max relative residual " << worst << " over " << n << " points";
}

// 8. Cosmological symmetry.
void killing_criterion(Outcome& out) {
  double worst = 0;
  for (const auto& [label, p] : fixtures::builtin()) {
    const auto lag = lagrangian_from_profile(p);
    for (const auto& pt : fixtures::points(p, 50, 808)) {
      const double r = killing_max(lag, pt, p.k());
      worst = std::max(worst, r);
      out.require(r < 1e-9, label);
    }
  }
  const Lagrangian aniso([](const auto& x, const auto& v) {
    using std::sin;
    const auto sn = sin(x[2]);
    return v[0] * v[0] - v[1] * v[1] - x[1] * x[1] * (v[2] * v[2] + sn * sn * v[3] * v[3]) +
           0.1 * v[1] * v[1] * v[1] / v[0];
  });
  TangentPoint pt;
  pt.x = {1.2, 0.7, 1.1, 0.4};
  pt.v = {1.5, 0.3, -0.4, 0.6};
  const double counter = killing_max(aniso, pt, 0.0);
  out.require(counter > 1e-3, "counterexample");
  out.detail << "max residual " << worst << ", counterexample " << counter;
}

// 9. Geodesic integration.
void geodesic_criterion(Outcome& out) {
  const auto uf = unicorn_flrw(-2.0, SF::exponential(1, 0.1), 0.3);
  const std::vector<std::pair<Vec4, Vec4>> data = {{{1, 0.7, 1.1, 0.4}, {1, 0.2, 0.1, 0.05}},
                                                   {{0.5, 0.4, 2.0, 1.0}, {1.3, -0.1, 0.3, 0.2}},
                                                   {{1.5, 0.9, 0.8, 3.0}, {0.8, 0.15, -0.1, 0.1}}};
  double drift = 0;
  for (const auto& [x, v] : data) {
    GeodesicOptions o;
    o.rel_tol = 1e-10;
    const auto tr = integrate_geodesic(uf, x, v, 10, o);
    out.require(tr.status == GeodesicStatus::completed, "UnicornFLRW run status");
    out.require(tr.L0 > 0, "timelike data");
    drift = std::max(drift, tr.max_L_drift);
  }
  out.require(drift < 1e-8, "drift");

  const auto mk = unicorn_flrw(-1.0, SF::constant(1.0), 0);
  const auto tr = integrate_geodesic(mk, {0, 1, M_PI / 2, 0}, {1, 0.3, 0, 0.2}, 10);
  double line = 0;
  for (const auto& s : tr.states) {
    const double r = s.x[1], th = s.x[2], ph = s.x[3];
    const double X[4] = {s.x[0], r * std::sin(th) * std::cos(ph), r * std::sin(th) * std::sin(ph), r * std::cos(th)};
    const double E[4] = {s.lambda, 1 + 0.3 * s.lambda, 0.2 * s.lambda, 0};
    for (int i = 0; i < 4; ++i) line = std::max(line, std::abs(X[i] - E[i]));
  }
  out.require(line < 1e-10, "straight line");

  std::vector<double> drifts;
  for (double tol : {1e-5, 5e-6, 2.5e-6, 1.25e-6}) {
    GeodesicOptions o;
    o.rel_tol = o.abs_tol = tol;
    o.max_step = 10;
    drifts.push_back(integrate_geodesic(uf, data[0].first, data[0].second, 10, o).max_L_drift);
  }
  for (std::size_t i = 1; i < drifts.size(); ++i) out.require(drifts[i] < drifts[i - 1], "order consistency");
  out.detail << "max drift " << drift << ", straight-line error " << line << ", drift under halving";
  for (double d : drifts) out.detail << " " << d;
}

// 10. Cone-regular spray of the second unicorn family.
void specialized_spray_criterion(Outcome& out) {
  const auto p = make_profile(Family::unicorn_l2, {{"d1", -2.0}}, {{"s2", SF::constant(1.0)}, {"c3", SF::power_law(0.2, 1)}}, 0.3);
  const auto lag = lagrangian_from_profile(p);
  OracleRequest req;
  req.landsberg = req.curvature = false;
  double worst = 0;
  for (const auto& pt : fixtures::points(p, 100, 1010)) {
    const auto G = specialized_spray(p, pt);
    out.require(G.has_value(), "specialized spray available");
    if (!G) continue;
    const auto o = oracle_eval(lag, pt, req);
    const double scale = std::max(max_abs(o.G), max_abs(o.N) * max_abs(pt.v));
    for (int a = 0; a < 4; ++a) worst = std::max(worst, std::abs((*G)[a] - o.G[a]) / scale);
  }
  out.require(worst < 1e-10, "interior agreement");

  const double t = 1.0;
  const auto roots = null_directions(p, t).null_roots;
  out.require(roots.size() == 2, "two cone roots");
  double largest = 0;
  for (double root : roots)
    for (double eps : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10}) {
      const auto G = specialized_spray(p, cone_vector(p, t, root * (1 - eps)));
      if (!G) continue;
      for (double g : *G) {
        out.require(std::isfinite(g), "finite near cone");
        largest = std::max(largest, std::abs(g));
      }
    }
  out.require(largest < 1e6, "bounded near cone");
  out.detail << "max relative deviation " << worst << ", max |G| on approach " << largest;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"oracle equivalence", oracle_equivalence_criterion},
      {"unicorn verification", unicorn_criterion},
      {"degeneration to FLRW", degeneration_criterion},
      {"branch fixtures", branch_criterion},
      {"necessary-condition equivalence", necessary_condition_criterion},
      {"causal structure", causal_criterion},
      {"determinant factorization", determinant_criterion},
      {"Killing invariance", killing_criterion},
      {"geodesic conservation", geodesic_criterion},
      {"specialized spray", specialized_spray_criterion},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      criteria[i].second(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    for (const auto& f : out.failed) out.detail << " [failed: " << f << "]";
    failures += out.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, out.detail.str().c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
