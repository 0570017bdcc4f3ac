// cosmofinsler: command-line front end.
//
// Exit status: 0 success, 1 a numerical check failed, 2 configuration error.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cosmofinsler/cosmofinsler.hpp"

namespace cf = cosmofinsler;
using cf::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string profile;
  std::string check = "all";
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  double tol = 0;  // 0: per-check default
  std::string grid;
  std::string out;
  std::string format = "json";

  double t = 1.0;
  std::string x = "1,0.7,1.1,0.4";
  std::string v = "1,0.3,0.2,0.1";
  std::string level = "landsberg";
  bool with_oracle = false;

  double span = 10.0;
  double max_step = 0.1;
  std::string source = "auto";

  std::size_t n = 400;
  double margin = 1e-6;
  std::string s_range = "-10:10";
  std::size_t brackets = 10000;
};

cf::Vec4 parse_vec4(const std::string& text, const char* flag) {
  cf::Vec4 out{};
  std::istringstream is(text);
  std::string item;
  int i = 0;
  while (std::getline(is, item, ',')) {
    if (i >= 4) throw cf::ConfigError(std::string(flag) + ": expected 4 comma-separated numbers");
    try {
      std::size_t used = 0;
      out[i] = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw cf::ConfigError(std::string(flag) + ": '" + item + "' is not a number");
    }
    ++i;
  }
  if (i != 4) throw cf::ConfigError(std::string(flag) + ": expected 4 comma-separated numbers");
  return out;
}

cf::Interval parse_range(const std::string& text, const char* flag) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(text);
    cf::Interval iv{std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
    if (!(iv.hi > iv.lo)) throw std::invalid_argument(text);
    return iv;
  } catch (const std::exception&) {
    throw cf::ConfigError(std::string(flag) + ": expected 'lo:hi' with lo < hi, got '" + text + "'");
  }
}

cf::SampleSpec sample_spec(const Options& o) {
  cf::SampleSpec spec;
  spec.count = o.samples;
  spec.seed = o.seed;
  if (!o.grid.empty()) {
    const auto g = cf::parse_grid(o.grid);
    spec.t_min = g.t_min;
    spec.t_max = g.t_max;
    spec.s_min = g.s_min;
    spec.s_max = g.s_max;
  }
  return spec;
}

Json sampling_json(const cf::SampleSpec& s) {
  return {{"samples", s.count}, {"seed", s.seed},         {"t_range", {s.t_min, s.t_max}},
          {"s_range", {s.s_min, s.s_max}}, {"margin", s.margin}, {"end_margin", s.end_margin}};
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw cf::ConfigError("cannot write '" + o.out + "'");
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

double check_tol(const Options& o, double fallback) { return o.tol > 0 ? o.tol : fallback; }

cf::Check make_check(std::string name, std::string eq, double residual, double tol) {
  return cf::Check{std::move(name), std::move(eq), residual, tol, residual < tol};
}

int run_classify(const Options& o, const cf::Profile& prof, Json report) {
  const auto spec = sample_spec(o);
  const auto label = cf::classify_profile(prof, spec);
  const auto& ev = label.evidence;
  report["label"] = cf::ladder_name(label.ladder);
  report["branches"] = label.branches;
  auto stat = [](const cf::Statistic& s) {
    return Json{{"max", s.max}, {"min", s.min}, {"fraction_above_nonvanishing", s.fraction_large}};
  };
  Json branches = Json::object();
  for (int b = 0; b < 6; ++b) branches[std::to_string(b + 1)] = stat(ev.branch[b]);
  report["evidence"] = {{"points", ev.points},
                        {"degenerate_points", ev.degenerate_points},
                        {"max_cartan", ev.cartan.max},
                        {"berwald_indicator", stat(ev.berwald)},
                        {"max_landsberg", ev.landsberg.max},
                        {"max_landsberg_trace", ev.max_landsberg_trace},
                        {"hessian", stat(ev.hessian)},
                        {"cartan", stat(ev.cartan)},
                        {"landsberg", stat(ev.landsberg)},
                        {"branch_factors", branches}};
  report["thresholds"] = {{"vanish", label.thresholds.vanish},
                          {"nonvanish", label.thresholds.nonvanish},
                          {"fraction", label.thresholds.fraction}};
  report["notes"] = label.notes;
  report["grid"] = sampling_json(spec);
  emit(o, dump(report));
  return kExitOk;
}

int run_verify(const Options& o, const cf::Profile& prof, Json report) {
  static const std::vector<std::string> names{"landsberg", "oracle", "killing", "euler", "determinant", "homogeneity"};
  if (o.check != "all" && std::find(names.begin(), names.end(), o.check) == names.end())
    throw cf::ConfigError("--check: unknown check '" + o.check + "'");
  auto wanted = [&](const std::string& n) { return o.check == "all" || o.check == n; };

  const auto spec = sample_spec(o);
  const auto points = cf::sample_points(prof, spec);
  if (points.empty()) throw cf::ConfigError("no valid sample points in the configured grid");
  const auto lag = cf::lagrangian_from_profile(prof);

  double landsberg = 0, landsberg_abs = 0, killing = 0, euler = 0, det = 0, homog = 0;
  cf::OracleComparison oracle;
  std::size_t killing_points = 0;
  for (const auto& p : points) {
    const auto e = cf::geometry_eval(prof, p, cf::Level::landsberg);
    if (wanted("landsberg")) {
      landsberg = std::max(landsberg, e.landsberg_relative());
      landsberg_abs = std::max(landsberg_abs, cf::max_abs(e.P));
    }
    if (wanted("oracle")) oracle.merge(cf::compare_with_oracle(e, cf::oracle_eval(lag, p)));
    if (wanted("killing")) {
      try {
        killing = std::max(killing, cf::killing_max(lag, p, prof.k()));
        ++killing_points;
      } catch (const cf::DomainError&) {
      }
    }
    if (wanted("euler")) euler = std::max(euler, cf::euler_residuals(prof, p).max());
    if (wanted("determinant")) det = std::max(det, cf::determinant_residual(e));
    if (wanted("homogeneity")) homog = std::max(homog, cf::homogeneity_residual(prof, p, 1.7));
  }

  std::vector<cf::Check> checks;
  if (wanted("landsberg"))
    checks.push_back(make_check("landsberg", "P_abc = 1/2 (R2 T_abc + R1 w_a w_b w_c) = 0", landsberg, check_tol(o, 1e-8)));
  if (wanted("oracle")) {
    const double tol = check_tol(o, 1e-8);
    checks.push_back(make_check("oracle.g", "g_ab = 1/2 d.a d.b L", oracle.g, tol));
    checks.push_back(make_check("oracle.g_inv", "g^ab g_bc = delta^a_c", oracle.g_inv, tol));
    checks.push_back(make_check("oracle.C", "C_abc = 1/4 d.a d.b d.c L", oracle.C, tol));
    checks.push_back(make_check("oracle.G", "G^a = 1/4 g^ab (xdot^c d_c d.b L - d_b L)", oracle.G, tol));
    checks.push_back(make_check("oracle.N", "N^a_b = d.b G^a", oracle.N, tol));
    checks.push_back(make_check("oracle.P", "P_abc = nabla C_abc", oracle.P, tol));
  }
  if (wanted("killing"))
    checks.push_back(make_check("killing", "X^C_I(L) = 0, I = 1..6", killing, check_tol(o, 1e-9)));
  if (wanted("euler"))
    checks.push_back(make_check("euler", "xdot^a d.a L = 2L, g_ab xdot^a xdot^b = L, C_abc xdot^a = 0", euler, check_tol(o, 1e-10)));
  if (wanted("determinant"))
    checks.push_back(make_check("determinant", "det g = det(w_ab) h^4 h'^2 / s^2 h h''", det, check_tol(o, 1e-10)));
  if (wanted("homogeneity"))
    checks.push_back(make_check("homogeneity", "g, C, G, N, P homogeneous of degree 0, -1, 2, 1, 0", homog, check_tol(o, 1e-9)));

  bool pass = true;
  report["checks"] = Json::array();
  for (const auto& c : checks) {
    report["checks"].push_back(cf::check_to_json(c));
    pass = pass && c.pass;
  }
  if (wanted("landsberg")) report["max_abs_P"] = landsberg_abs;
  if (wanted("killing")) report["killing_points"] = killing_points;
  report["points"] = points.size();
  report["grid"] = sampling_json(spec);
  report["pass"] = pass;
  emit(o, dump(report));
  if (!pass) {
    for (const auto& c : checks)
      if (!c.pass) std::cerr << "check failed: " << c.name << " residual " << c.max_residual << " >= " << c.tolerance << "\n";
  }
  return pass ? kExitOk : kExitCheckFailed;
}

int run_tensors(const Options& o, const cf::Profile& prof, Json report) {
  cf::TangentPoint p;
  p.x = parse_vec4(o.x, "--x");
  p.v = parse_vec4(o.v, "--v");
  const auto level = cf::level_from_name(o.level);
  cf::GeometryEval e;
  try {
    e = cf::geometry_eval(prof, p, level);
  } catch (const cf::Error& err) {
    throw cf::ConfigError(std::string("tensors: ") + err.what());
  }
  report["geometry"] = cf::geometry_to_json(e);
  if (o.with_oracle) {
    const auto ev = cf::oracle_eval(cf::lagrangian_from_profile(prof), p);
    report["oracle"] = {{"g", cf::mat_to_json(ev.g)},
                        {"G", cf::vec_to_json(ev.G)},
                        {"N", cf::mat_to_json(ev.N)},
                        {"P", cf::tensor3_to_json(ev.P)}};
    if (level == cf::Level::landsberg) {
      const auto cmp = cf::compare_with_oracle(e, ev);
      report["oracle_deviation"] = {{"g", cmp.g}, {"g_inv", cmp.g_inv}, {"C", cmp.C}, {"G", cmp.G}, {"N", cmp.N}, {"P", cmp.P}};
    }
  }
  emit(o, dump(report));
  return kExitOk;
}

int run_geodesic(const Options& o, const cf::Profile& prof, Json report) {
  cf::GeodesicOptions g;
  g.rel_tol = o.tol > 0 ? o.tol : 1e-10;
  g.max_step = o.max_step;
  g.source = cf::spray_source_from_name(o.source);
  const auto x0 = parse_vec4(o.x, "--x");
  const auto v0 = parse_vec4(o.v, "--v");
  cf::Trajectory traj;
  try {
    traj = cf::integrate_geodesic(prof, x0, v0, o.span, g);
  } catch (const cf::DomainError& e) {
    throw cf::ConfigError(e.what());
  }
  const bool ok = traj.status == cf::GeodesicStatus::completed;
  if (o.format == "csv") {
    std::ostringstream os;
    cf::write_trajectory_csv(os, traj);
    emit(o, os.str());
  } else {
    const auto& last = traj.states.back();
    report["integrator"] = {{"method", "dopri5"}, {"rel_tol", g.rel_tol}, {"max_step", g.max_step}, {"spray", o.source}};
    report["status"] = cf::geodesic_status_name(traj.status);
    if (!traj.locus.empty()) report["locus"] = traj.locus;
    report["L0"] = traj.L0;
    report["max_L_drift"] = traj.max_L_drift;
    report["steps"] = {{"accepted", traj.accepted}, {"rejected", traj.rejected}};
    report["final"] = {{"lambda", last.lambda}, {"x", last.x}, {"v", last.v}, {"L", last.L}, {"tau", last.tau}};
    emit(o, dump(report));
  }
  if (!ok) std::cerr << "geodesic stopped early: " << cf::geodesic_status_name(traj.status) << " (" << traj.locus << ")\n";
  return ok ? kExitOk : kExitCheckFailed;
}

int run_cones(const Options& o, const cf::Profile& prof, Json report) {
  cf::RootScan scan;
  const auto range = parse_range(o.s_range, "--s-range");
  scan.s_lo = range.lo;
  scan.s_hi = range.hi;
  scan.brackets = o.brackets;
  const auto rep = cf::cone_report(prof, o.t, o.n, o.margin, scan);
  if (o.format == "csv") {
    std::ostringstream os;
    os.precision(17);
    os << "s,det_g_factored,det_g_direct,sig_pattern\n";
    for (const auto& s : rep.samples) {
      os << s.s << ',';
      if (s.pattern == "undefined") os << ",,undefined\n";
      else os << s.det_g_factored << ',' << s.det_g_direct << ",\"" << s.pattern << "\"\n";
    }
    emit(o, os.str());
  } else {
    report["t"] = rep.t;
    report["null_roots"] = rep.null_roots;
    report["closed_form_roots"] = rep.closed_form_roots;
    report["warnings"] = rep.warnings;
    report["warning"] = !rep.warnings.empty();
    Json lor = Json::array();
    for (const auto& iv : rep.lorentzian) lor.push_back({iv.lo, iv.hi});
    report["lorentzian_intervals"] = lor;
    report["det_g_negative_everywhere"] = rep.det_negative_everywhere;
    report["det_g_positive_everywhere"] = rep.det_positive_everywhere;
    report["asymmetry"] = rep.asymmetry ? Json(*rep.asymmetry) : Json(nullptr);
    report["convexity"] = {{"checks", rep.convexity.checks},
                           {"violations", rep.convexity.violations},
                           {"worst_margin", rep.convexity.checks ? Json(rep.convexity.worst_margin) : Json(nullptr)},
                           {"L_positive_inside", rep.convexity.L_positive_inside}};
    report["scan"] = {{"s_range", {scan.s_lo, scan.s_hi}}, {"brackets", scan.brackets}, {"samples_per_segment", o.n}, {"margin", o.margin}};
    emit(o, dump(report));
  }
  if (!rep.warnings.empty())
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  return kExitOk;
}

int run_scan_branches(const Options& o, const cf::Profile& prof, Json report) {
  const auto g = o.grid.empty() ? cf::GridSpec{} : cf::parse_grid(o.grid);
  struct Row {
    double t, s;
    std::array<double, 6> rel;
  };
  std::vector<Row> rows;
  std::array<double, 6> max_rel{};
  for (std::size_t i = 0; i < g.nt; ++i) {
    const double t = g.nt == 1 ? g.t_min : g.t_min + (g.t_max - g.t_min) * static_cast<double>(i) / static_cast<double>(g.nt - 1);
    for (std::size_t j = 0; j < g.ns; ++j) {
      const double s = g.ns == 1 ? g.s_min : g.s_min + (g.s_max - g.s_min) * static_cast<double>(j) / static_cast<double>(g.ns - 1);
      if (s == 0.0) continue;
      cf::ProfileJet jet;
      try {
        jet = cf::eval_jet(prof, t, s);
      } catch (const cf::Error&) {
        continue;
      }
      const auto br = cf::branch_residuals(jet);
      Row r{t, s, {}};
      for (int b = 0; b < 6; ++b) {
        r.rel[b] = br.branch(b + 1).relative();
        max_rel[b] = std::max(max_rel[b], r.rel[b]);
      }
      rows.push_back(r);
    }
  }
  if (rows.empty()) throw cf::ConfigError("scan-branches: no grid point lies in the profile's domain");
  if (o.format == "csv") {
    std::ostringstream os;
    os.precision(17);
    os << "t,s,branch1,branch2,branch3,branch4,branch5,branch6\n";
    for (const auto& r : rows) {
      os << r.t << ',' << r.s;
      for (double x : r.rel) os << ',' << x;
      os << '\n';
    }
    emit(o, os.str());
    return kExitOk;
  }
  const double tol = check_tol(o, 1e-9);
  Json br = Json::object();
  std::vector<int> vanishing;
  for (int b = 0; b < 6; ++b) {
    br[std::to_string(b + 1)] = max_rel[b];
    if (max_rel[b] < tol) vanishing.push_back(b + 1);
  }
  report["grid"] = {{"t_range", {g.t_min, g.t_max}}, {"nt", g.nt}, {"s_range", {g.s_min, g.s_max}}, {"ns", g.ns}, {"points_in_domain", rows.size()}};
  report["max_relative_residual"] = br;
  report["tolerance"] = tol;
  report["vanishing_branches"] = vanishing;
  emit(o, dump(report));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cosmologically symmetric Finsler spacetimes: tensors, classification, cones and geodesics"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--profile", o.profile, "Profile config: JSON file path or inline JSON")->required();
    c->add_option("--out", o.out, "Output path (default stdout)");
  };
  auto add_sampling = [&](CLI::App* c) {
    c->add_option("--samples", o.samples, "Number of sample points")->check(CLI::PositiveNumber);
    c->add_option("--seed", o.seed, "Sampling seed");
    c->add_option("--grid", o.grid, "Sampling ranges 'tmin:tmax:n,smin:smax:n'");
  };

  auto* classify = app.add_subcommand("classify", "Place a profile on the Finsler ladder");
  add_common(classify);
  add_sampling(classify);

  auto* verify = app.add_subcommand("verify", "Check closed-form identities on sampled points");
  add_common(verify);
  add_sampling(verify);
  verify->add_option("--check", o.check, "landsberg, oracle, killing, euler, determinant, homogeneity or all");
  verify->add_option("--tol", o.tol, "Tolerance overriding each check's default")->check(CLI::PositiveNumber);

  auto* tensors = app.add_subcommand("tensors", "Closed-form tensors at one tangent vector");
  add_common(tensors);
  tensors->add_option("--x", o.x, "Point t,r,theta,phi");
  tensors->add_option("--v", o.v, "Velocity tdot,rdot,thetadot,phidot");
  tensors->add_option("--level", o.level, "metric, cartan, spray, connection or landsberg");
  tensors->add_flag("--with-oracle", o.with_oracle, "Also report oracle values and deviations");

  auto* geodesic = app.add_subcommand("geodesic", "Integrate a geodesic");
  add_common(geodesic);
  geodesic->add_option("--x", o.x, "Initial point t,r,theta,phi");
  geodesic->add_option("--v", o.v, "Initial velocity tdot,rdot,thetadot,phidot");
  geodesic->add_option("--span", o.span, "Affine parameter span")->check(CLI::PositiveNumber);
  geodesic->add_option("--tol", o.tol, "Relative tolerance (default 1e-10)")->check(CLI::PositiveNumber);
  geodesic->add_option("--max-step", o.max_step, "Largest step")->check(CLI::PositiveNumber);
  geodesic->add_option("--spray", o.source, "auto, closed, oracle or specialized");
  geodesic->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* cones = app.add_subcommand("cones", "Null directions, determinant sign and signature");
  add_common(cones);
  cones->add_option("--t", o.t, "Time coordinate");
  cones->add_option("--n", o.n, "Signature samples per segment between roots")->check(CLI::PositiveNumber);
  cones->add_option("--margin", o.margin, "Distance kept from each root")->check(CLI::PositiveNumber);
  cones->add_option("--s-range", o.s_range, "Root scan interval 'lo:hi'");
  cones->add_option("--brackets", o.brackets, "Number of root brackets")->check(CLI::PositiveNumber);
  cones->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* scan = app.add_subcommand("scan-branches", "Branch residuals on a (t, s) grid");
  add_common(scan);
  scan->add_option("--grid", o.grid, "Grid 'tmin:tmax:n,smin:smax:n'");
  scan->add_option("--tol", o.tol, "Vanishing threshold (default 1e-9)")->check(CLI::PositiveNumber);
  scan->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const Json cfg = cf::read_profile_config(o.profile);
    const auto prof = cf::profile_from_json(cfg);
    auto* cmd = app.get_subcommands().front();
    Json run{{"profile", cfg}};
    for (const auto* opt : cmd->get_options()) {
      if (opt->get_name() == "--help" || opt->get_name() == "--profile" || opt->get_name() == "--out") continue;
      if (opt->count() > 0) run["options"][opt->get_name()] = opt->as<std::string>();
    }
    Json report = cf::report_header(cmd->get_name(), run);
    report["profile_flags"] = prof.flags();
    const auto& name = cmd->get_name();
    if (name == "classify") return run_classify(o, prof, report);
    if (name == "verify") return run_verify(o, prof, report);
    if (name == "tensors") return run_tensors(o, prof, report);
    if (name == "geodesic") return run_geodesic(o, prof, report);
    if (name == "cones") return run_cones(o, prof, report);
    return run_scan_branches(o, prof, report);
  } catch (const cf::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cf::ParameterError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cf::ConsistencyError& e) {
    std::cerr << "internal consistency failure: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const cf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}
