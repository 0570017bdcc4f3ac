#pragma once

// JSON profile configuration, tensor serialization and self-describing reports.

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cosmofinsler/cosmo_geometry.hpp"
#include "cosmofinsler/errors.hpp"
#include "cosmofinsler/profiles.hpp"
#include "cosmofinsler/scale_function.hpp"

namespace cosmofinsler {

using Json = nlohmann::json;

inline constexpr const char* kToolName = "cosmofinsler";
inline constexpr const char* kToolVersion = "0.1.0";

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return out;
}

namespace detail {

inline void reject_unknown(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

inline double number_field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

inline ScaleFunction scale_function_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError(where + ": missing string field 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    detail::reject_unknown(j, {"kind", "c"}, where);
    return ScaleFunction::constant(detail::number_field(j, "c", where));
  }
  if (kind == "power_law") {
    detail::reject_unknown(j, {"kind", "c", "p"}, where);
    return ScaleFunction::power_law(detail::number_field(j, "c", where), detail::number_field(j, "p", where));
  }
  if (kind == "exponential") {
    detail::reject_unknown(j, {"kind", "c", "lambda"}, where);
    return ScaleFunction::exponential(detail::number_field(j, "c", where), detail::number_field(j, "lambda", where));
  }
  throw ConfigError(where + ".kind: unknown kind '" + kind + "' (expected constant, power_law or exponential)");
}

inline Json scale_function_to_json(const ScaleFunction& f) {
  switch (f.kind()) {
    case ScaleFunction::Kind::constant: return {{"kind", "constant"}, {"c", f.c()}};
    case ScaleFunction::Kind::power_law: return {{"kind", "power_law"}, {"c", f.c()}, {"p", f.rate()}};
    case ScaleFunction::Kind::exponential: return {{"kind", "exponential"}, {"c", f.c()}, {"lambda", f.rate()}};
  }
  return {};
}

/// Builds a profile from {"family", "k", "params", "scale_fns"}. Besides the
/// built-in family names, "UnicornL2Conformal" takes params e1, e2 and scale
/// function c3. Custom profiles need code and are rejected here.
inline Profile profile_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("profile config: expected a JSON object");
  detail::reject_unknown(j, {"family", "k", "params", "scale_fns"}, "profile config");
  if (!j.contains("family") || !j.at("family").is_string()) throw ConfigError("profile config: missing string field 'family'");
  const auto family = j.at("family").get<std::string>();
  double k = 0;
  if (j.contains("k")) k = detail::number_field(j, "k", "profile config");

  try {
    std::map<std::string, double> params;
    if (j.contains("params")) {
      if (!j.at("params").is_object()) throw ConfigError("profile config.params: expected an object");
      for (const auto& [name, v] : j.at("params").items()) params[name] = detail::number_field(j.at("params"), name.c_str(), "params");
    }
    std::map<std::string, ScaleFunction> fns;
    if (j.contains("scale_fns")) {
      if (!j.at("scale_fns").is_object()) throw ConfigError("profile config.scale_fns: expected an object");
      for (const auto& [name, v] : j.at("scale_fns").items()) fns.emplace(name, scale_function_from_json(v, "scale_fns." + name));
    }

    if (family == "UnicornL2Conformal") {
      for (const auto& [name, _] : params)
        if (name != "e1" && name != "e2") throw ConfigError("UnicornL2Conformal: unknown parameter '" + name + "'");
      for (const auto& [name, _] : fns)
        if (name != "c3") throw ConfigError("UnicornL2Conformal: unknown scale function '" + name + "'");
      if (!params.count("e1") || !params.count("e2") || !fns.count("c3"))
        throw ConfigError("UnicornL2Conformal: needs params e1, e2 and scale function c3");
      return unicorn_l2_conformal(params.at("e1"), params.at("e2"), fns.at("c3"), k);
    }
    const Family fam = family_from_name(family);
    if (fam == Family::custom) throw ConfigError("Custom profiles cannot be read from JSON; build them in code");
    return make_profile(fam, params, fns, k);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
}

/// Parses JSON text, reporting syntax errors with line and column.
inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(source + ": malformed JSON at " + detail::line_column(text, e.byte) + ": " + e.what());
  }
}

/// Reads a profile config from a file path, or from inline JSON when the
/// argument starts with '{'.
inline Json read_profile_config(const std::string& path_or_inline) {
  if (!path_or_inline.empty() && path_or_inline.front() == '{') return parse_json_text(path_or_inline, "inline profile");
  std::ifstream in(path_or_inline);
  if (!in) throw ConfigError("cannot open profile config '" + path_or_inline + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path_or_inline);
}

/// "tmin:tmax:n,smin:smax:n".
struct GridSpec {
  double t_min = 0.5, t_max = 2.0;
  std::size_t nt = 5;
  double s_min = -3.0, s_max = 3.0;
  std::size_t ns = 61;
};

inline GridSpec parse_grid(const std::string& text) {
  auto fail = [&]() -> GridSpec { throw ConfigError("--grid: expected 'tmin:tmax:n,smin:smax:n', got '" + text + "'"); };
  GridSpec g;
  double v[6];
  char c1, c2, c3, c4, c5;
  std::istringstream is(text);
  if (!(is >> v[0] >> c1 >> v[1] >> c2 >> v[2] >> c3 >> v[3] >> c4 >> v[4] >> c5 >> v[5])) return fail();
  if (c1 != ':' || c2 != ':' || c3 != ',' || c4 != ':' || c5 != ':') return fail();
  is >> std::ws;
  if (!is.eof()) return fail();
  if (v[2] < 1 || v[5] < 1 || v[2] != static_cast<double>(static_cast<std::size_t>(v[2])) ||
      v[5] != static_cast<double>(static_cast<std::size_t>(v[5])))
    throw ConfigError("--grid: point counts must be positive integers");
  if (v[1] < v[0] || v[4] < v[3]) throw ConfigError("--grid: ranges must satisfy min <= max");
  g.t_min = v[0];
  g.t_max = v[1];
  g.nt = static_cast<std::size_t>(v[2]);
  g.s_min = v[3];
  g.s_max = v[4];
  g.ns = static_cast<std::size_t>(v[5]);
  return g;
}

inline std::string index_label(std::initializer_list<int> idx) {
  std::string s;
  for (int i : idx) s += static_cast<char>('0' + i);
  return s;
}

inline Json vec_to_json(const Vec4& v) {
  Json j = Json::object();
  for (int a = 0; a < 4; ++a) j[index_label({a})] = v[a];
  return j;
}

inline Json mat_to_json(const Mat4& m) {
  Json j = Json::object();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) j[index_label({a, b})] = m[a][b];
  return j;
}

inline Json tensor3_to_json(const Tensor3& t) {
  Json j = Json::object();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) j[index_label({a, b, c})] = t[a][b][c];
  return j;
}

inline Json jet_to_json(const ProfileJet& j) {
  return {{"t", j.t},       {"s", j.s},       {"h", j.h},       {"hs1", j.hs1},   {"hs2", j.hs2},
          {"hs3", j.hs3},   {"hs4", j.hs4},   {"ht", j.ht},     {"hts1", j.hts1}, {"hts2", j.hts2},
          {"hts3", j.hts3}};
}

inline Json geometry_to_json(const GeometryEval& e) {
  Json j;
  j["level"] = level_name(e.level);
  j["point"] = {{"x", e.point.x}, {"v", e.point.v}};
  j["tdot"] = e.tdot;
  j["w"] = e.w;
  j["s"] = e.s;
  j["jet"] = jet_to_json(e.jet);
  j["g"] = mat_to_json(e.g);
  j["det_g"] = e.det_g;
  j["det_g_factored"] = e.det_g_factored;
  j["w_cov"] = vec_to_json(e.w_cov);
  const auto& b = e.branches;
  j["branch_factors"] = {{"D", b.D},
                         {"d_time", b.d_time.raw},
                         {"d_space", b.d_space.raw},
                         {"factor0", b.factor0.raw},
                         {"factor1", b.factor1.raw},
                         {"factor2", b.factor2.raw},
                         {"factor3", b.factor3.raw}};
  if (e.level >= Level::cartan) {
    j["g_inv"] = mat_to_json(e.g_inv);
    j["phi1"] = e.phi1;
    j["phi2"] = e.phi2;
    j["T"] = tensor3_to_json(e.T);
    j["C"] = tensor3_to_json(e.C);
  }
  if (e.level >= Level::spray) {
    j["Phi"] = e.Phi;
    j["Psi"] = e.Psi;
    j["G"] = vec_to_json(e.G);
  }
  if (e.level >= Level::connection) j["N"] = mat_to_json(e.N);
  if (e.level >= Level::landsberg) {
    j["p"] = e.p;
    j["q"] = e.q;
    j["R1"] = e.R1.raw;
    j["R2"] = e.R2.raw;
    j["P"] = tensor3_to_json(e.P);
  }
  return j;
}

struct Check {
  std::string name;
  /// Identity being tested, written out as an equation.
  std::string equation;
  double max_residual = 0;
  double tolerance = 0;
  bool pass = false;
};

inline Json check_to_json(const Check& c) {
  return {{"name", c.name}, {"equation", c.equation}, {"max_residual", c.max_residual}, {"tolerance", c.tolerance}, {"pass", c.pass}};
}

/// Report skeleton carrying tool, version, command and a hash of the run configuration.
inline Json report_header(const std::string& command, const Json& run_config) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["config"] = run_config;
  j["config_hash"] = hex64(fnv1a(run_config.dump()));
  return j;
}

}  // namespace cosmofinsler
