#include "segver/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "segver/error.hpp"

namespace segver {

using nlohmann::json;

json convention_to_json(const VIConvention& c) {
  return json{{"root_target", c.root_target}, {"phase", c.phase}, {"tau", c.tau}, {"key", c.key()}};
}

VIConvention convention_from_json(const json& j) {
  VIConvention c;
  c.root_target = j.at("root_target").get<int>();
  c.phase = j.at("phase").get<int>();
  c.tau = j.at("tau").get<int>();
  if ((c.root_target != 1 && c.root_target != -1) || (c.phase != 1 && c.phase != -1)) {
    throw InvalidInput("malformed convention record");
  }
  return c;
}

json params_to_json(const ModuliInput& in, const DerivedParams& p) {
  return json{{"g", in.g},       {"r", in.r},           {"d", in.d},          {"ell", in.level},
              {"h", p.h},        {"r0", p.r0},          {"d0", p.d0},         {"d_norm", p.d_norm},
              {"n", p.n},        {"N", p.exponent},     {"vdim", p.vdim}};
}

json triangle_to_json(const TriangleReport& rep, bool with_timing) {
  json j = params_to_json(rep.input, rep.params);
  const KClassCurve alpha = build_alpha(rep.input, rep.params);
  j["alpha"] = json{{"rank", alpha.rank}, {"degree", alpha.degree}, {"pushforward_rank", alpha.pushforward_rank}};
  j["verlinde"] = to_string(rep.verlinde);
  j["quot"] = to_string(rep.quot);
  j["segre"] = to_string(rep.segre);
  j["independent"] = rep.segre_independent;
  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back(json{{"name", c.name}, {"verdict", to_string(c.verdict)}, {"detail", c.detail}});
  }
  j["checks"] = std::move(checks);
  j["verdict"] = rep.passed() ? "pass" : "fail";
  if (with_timing) j["elapsed_ms"] = rep.elapsed_ms;
  return j;
}

json polynomial_to_json(int g, int r, std::int64_t d, const LevelPolynomial& poly) {
  json coeffs = json::array();
  for (const auto& c : poly.coefficients) coeffs.push_back(c.str());
  json samples = json::array();
  for (const auto& [level, v] : poly.samples) samples.push_back(json{{"ell", level}, {"verlinde", to_string(v)}});
  return json{{"g", g},
              {"r", r},
              {"d", d},
              {"degree", poly.degree},
              {"coefficients", std::move(coeffs)},
              {"volume_term", poly.volume_term.str()},
              {"samples", std::move(samples)},
              {"verdict", "pass"}};
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{"g", "r", "d", "d_norm", "ell", "n", "N", "verlinde",
                                             "quot", "segre", "independent", "verdict"};
  return cols;
}

std::string csv_row(const json& record) {
  std::ostringstream os;
  bool first = true;
  for (const auto& col : csv_columns()) {
    if (!first) os << ',';
    first = false;
    if (!record.contains(col)) continue;
    const json& v = record.at(col);
    if (v.is_string()) {
      os << v.get<std::string>();
    } else if (v.is_boolean()) {
      os << (v.get<bool>() ? "true" : "false");
    } else {
      os << v.dump();
    }
  }
  return os.str();
}

void save_convention(const std::string& path, const VIConvention& c, const json& summary) {
  const json doc{{"schema_version", kSchemaVersion}, {"convention", convention_to_json(c)}, {"battery", summary}};
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw InvalidInput("cannot write calibration config '" + path + "'");
    out << doc.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, target);
}

VIConvention load_convention(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("calibration config '" + path + "' not found; run `segver calibrate` first");
  try {
    const json doc = json::parse(in);
    return convention_from_json(doc.at("convention"));
  } catch (const json::exception& e) {
    throw InvalidInput("malformed calibration config '" + path + "': " + e.what());
  }
}

}  // namespace segver
