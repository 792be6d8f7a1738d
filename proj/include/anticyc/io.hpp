#pragma once

// Structured-text (JSON) records: group-ring elements, curve files, Brandt
// matrices, Gross points, theta runs and suite results. Every top-level
// record carries the schema, tool version and a hash of the run config.

#include "anticyc/brandt.hpp"
#include "anticyc/elliptic.hpp"
#include "anticyc/gross.hpp"
#include "anticyc/iwasawa.hpp"
#include "anticyc/suites.hpp"
#include "anticyc/theta.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef ANTICYC_VERSION
#define ANTICYC_VERSION "0.0.0"
#endif

namespace anticyc {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "anticyc/1";
inline constexpr const char* kToolVersion = ANTICYC_VERSION;

// ---------------------------------------------------------------- elements

inline Json to_json(const IwasawaElement& a) {
  const LayerContext& ctx = a.context();
  return Json{{"p", ctx.p()}, {"n", ctx.n()}, {"N", ctx.N()}, {"basis", "group"}, {"coeffs", a.coeffs()}};
}

inline IwasawaElement element_from_json(const Json& j) {
  try {
    if (j.at("basis").get<std::string>() != "group") throw ValidationError("element record: basis must be \"group\"");
    const LayerContext ctx(j.at("p").get<int64_t>(), j.at("n").get<int>(), j.at("N").get<int>());
    auto coeffs = j.at("coeffs").get<std::vector<int64_t>>();
    for (auto c : coeffs)
      if (c < 0 || c >= ctx.ring().modulus()) throw ValidationError("element record: coefficient out of range");
    return IwasawaElement(ctx, std::move(coeffs));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("element record: ") + e.what());
  }
}

inline Json to_json(const IntPoly& f) {
  Json out = Json::array();
  for (const auto& c : f.coeffs()) out.push_back(c.str());
  return out;
}

inline Json to_json(const Quaternion& x) {
  return Json::array({x.a.str(), x.b.str(), x.c.str(), x.d.str()});
}

// ---------------------------------------------------------------- curve files

struct CurveFile {
  EllipticCurve curve;
  int64_t conductor = 0;
  int64_t Nplus = 1;
  int64_t Nminus = 1;
  std::map<int64_t, int64_t> ap_table;  // optional, checked against point counts
};

inline CurveFile curve_from_json(const Json& j) {
  try {
    CurveFile c;
    c.curve.label = j.at("label").get<std::string>();
    const auto a = j.at("coefficients").get<std::vector<int64_t>>();
    if (a.size() != 5) throw ValidationError("curve file: coefficients must be [a1, a2, a3, a4, a6]");
    std::copy(a.begin(), a.end(), c.curve.a.begin());
    c.conductor = j.at("N").get<int64_t>();
    c.Nplus = j.at("Nplus").get<int64_t>();
    c.Nminus = j.at("Nminus").get<int64_t>();
    if (c.curve.discriminant() == 0) throw ValidationError("curve file: singular curve");
    if (c.Nplus * c.Nminus != c.conductor) throw ValidationError("curve file: Nplus * Nminus must equal N");
    if (j.contains("ap_table"))
      for (const auto& [q, v] : j.at("ap_table").items()) {
        const int64_t qq = std::stoll(q), aq = v.get<int64_t>();
        if (count_points_aq(c.curve, qq) != aq)
          throw ValidationError("curve file: a_" + q + " disagrees with the point count");
        c.ap_table[qq] = aq;
      }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("curve file: ") + e.what());
  } catch (const std::logic_error& e) {
    throw ValidationError(std::string("curve file: ") + e.what());
  }
}

inline Json to_json(const CurveFile& c) {
  Json out{{"label", c.curve.label},
           {"N", c.conductor},
           {"Nplus", c.Nplus},
           {"Nminus", c.Nminus},
           {"coefficients", c.curve.a}};
  if (!c.ap_table.empty()) {
    Json t = Json::object();
    for (auto [q, a] : c.ap_table) t[std::to_string(q)] = a;
    out["ap_table"] = t;
  }
  return out;
}

// ---------------------------------------------------------------- Brandt, Gross points

inline Json brandt_to_json(const IdealClassSet& cs, int64_t Nminus, int64_t Nplus,
                           const std::vector<BrandtOperator>& ops) {
  Json mats = Json::object();
  for (const auto& op : ops) mats[std::to_string(op.q)] = op.matrix;
  return Json{{"Nminus", Nminus}, {"Nplus", Nplus}, {"h", cs.size()}, {"weights", cs.weights}, {"matrices", mats}};
}

inline Json to_json(const GrossPointSet& g) {
  Json pts = Json::array();
  for (const auto& P : g.points)
    pts.push_back(Json{{"class", P.class_index},
                       {"x", to_json(P.x)},
                       {"form", {P.form.a, P.form.b, P.form.c}},
                       {"label", P.label},
                       {"orientation", P.orientation}});
  return Json{{"conductor", g.conductor},
              {"exponent", g.exponent},
              {"reference_orientation", g.reference_orientation},
              {"points", pts}};
}

// ---------------------------------------------------------------- suites

inline Json to_json(const SuiteResult& s) {
  Json checks = Json::array();
  for (const auto& c : s.checks) {
    Json e{{"name", c.name}, {"ok", c.ok}};
    if (!c.detail.empty()) e["detail"] = c.detail;
    checks.push_back(e);
  }
  return Json{{"suite", s.name}, {"passed", s.passed()}, {"checks", checks}};
}

// ---------------------------------------------------------------- envelope

/// FNV-1a over the canonical dump of the config.
inline std::string config_hash(const Json& config) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : config.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// {schema, tool_version, config, config_hash, result}.
inline Json envelope(const Json& config, Json result) {
  return Json{{"schema", kSchema},
              {"tool_version", kToolVersion},
              {"config", config},
              {"config_hash", config_hash(config)},
              {"result", std::move(result)}};
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("cannot parse " + path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace anticyc
