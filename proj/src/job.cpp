#include "segver/job.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "segver/cache.hpp"
#include "segver/calibration.hpp"
#include "segver/error.hpp"
#include "segver/report.hpp"
#include "segver/triangle.hpp"

namespace segver {

using nlohmann::json;

namespace {

enum class Status { Ok, Mismatch, Invalid };

struct Outcome {
  json record;
  Status status = Status::Ok;
};

json input_json(const ModuliInput& in) {
  return json{{"g", in.g}, {"r", in.r}, {"d", in.d}, {"ell", in.level}};
}

json range_json(const std::vector<std::int64_t>& v) { return json(v); }

int narrow(std::int64_t v, const char* what) {
  if (v < -1000000 || v > 1000000) throw InvalidInput(std::string(what) + " out of range");
  return static_cast<int>(v);
}

void require(const std::vector<std::int64_t>& v, const char* name) {
  if (v.empty()) throw InvalidInput(std::string("missing --") + name);
}

std::vector<ModuliInput> cartesian(const JobSpec& spec) {
  require(spec.g, "g");
  require(spec.r, "r");
  require(spec.d, "d");
  require(spec.ell, "ell");
  std::vector<ModuliInput> out;
  for (auto g : spec.g) {
    for (auto r : spec.r) {
      for (auto d : spec.d) {
        for (auto l : spec.ell) out.push_back(ModuliInput{narrow(g, "g"), narrow(r, "r"), d, narrow(l, "ell")});
      }
    }
  }
  return out;
}

DNormalizationPolicy policy_of(const JobSpec& spec) {
  DNormalizationPolicy p;
  p.cap = spec.stabilization_cap;
  if (spec.d_norm) {
    p.mode = DNormalizationPolicy::Mode::Fixed;
    p.fixed_degree = *spec.d_norm;
  }
  return p;
}

bool needs_convention(Command c) {
  return c == Command::Vi || c == Command::Verlinde || c == Command::Segre || c == Command::Verify ||
         c == Command::Sweep || c == Command::Fit;
}

template <typename Body>
Outcome guarded(json base, Body&& body) {
  Outcome o;
  try {
    o.record = body();
    const std::string verdict = o.record.value("verdict", "pass");
    o.status = verdict == "pass" ? Status::Ok : Status::Mismatch;
  } catch (const InvalidInput& e) {
    o.record = std::move(base);
    o.record["error"] = e.what();
    o.record["verdict"] = "invalid";
    o.status = Status::Invalid;
  } catch (const DegreeMismatch& e) {
    o.record = std::move(base);
    o.record["error"] = e.what();
    o.record["verdict"] = "invalid";
    o.status = Status::Invalid;
  } catch (const Error& e) {
    o.record = std::move(base);
    o.record["error"] = e.what();
    o.record["verdict"] = "fail";
    o.status = Status::Mismatch;
  }
  return o;
}

std::string line_for(Command cmd, const json& rec) {
  std::ostringstream os;
  if (rec.contains("g")) {
    os << "g=" << rec["g"].dump() << " r=" << rec["r"].dump() << " d=" << rec["d"].dump();
    if (rec.contains("ell")) os << " ell=" << rec["ell"].dump();
    if (rec.contains("n") && cmd == Command::Vi) os << " n=" << rec["n"].dump();
    os << ": ";
  }
  if (rec.contains("error")) {
    os << "error: " << rec["error"].get<std::string>();
  } else if (cmd == Command::Calibrate) {
    os << "tests=" << rec["tests"] << " survivors=" << rec["survivors"]
       << " closed_form_survivors=" << rec["closed_form_survivors"];
    if (rec.contains("convention")) os << " convention=" << rec["convention"]["key"].get<std::string>();
  } else if (cmd == Command::Params) {
    os << "h=" << rec["h"] << " r0=" << rec["r0"] << " d0=" << rec["d0"] << " n=" << rec["n"]
       << " d'=" << rec["d_norm"] << " N=" << rec["N"] << " vdim=" << rec["vdim"];
  } else if (cmd == Command::Vi) {
    os << "N=" << rec["N"] << " value=" << rec["value"].get<std::string>();
  } else if (cmd == Command::Verlinde) {
    os << "d'=" << rec["d_norm"] << " verlinde=" << rec["verlinde"].get<std::string>();
  } else if (cmd == Command::Segre) {
    os << "d'=" << rec["d_norm"] << " segre=" << rec["segre"].get<std::string>()
       << (rec["independent"].get<bool>() ? " (independent)" : " (bridge)");
  } else if (cmd == Command::Fit) {
    os << "degree=" << rec["degree"] << " volume_term=" << rec["volume_term"].get<std::string>() << " coefficients=[";
    bool first = true;
    for (const auto& c : rec["coefficients"]) {
      os << (first ? "" : ", ") << c.get<std::string>();
      first = false;
    }
    os << "]";
  } else {
    os << "d'=" << rec["d_norm"] << " verlinde=" << rec["verlinde"].get<std::string>()
       << " quot=" << rec["quot"].get<std::string>() << " segre=" << rec["segre"].get<std::string>();
  }
  if (rec.contains("verdict")) os << " [" << rec["verdict"].get<std::string>() << "]";
  return os.str();
}

void emit(const JobSpec& spec, const json& report, std::ostream& out) {
  if (spec.out_path.empty()) return;
  std::ostringstream body;
  if (spec.format == Format::Json) {
    body << report.dump(2) << '\n';
  } else {
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) body << (i ? "," : "") << cols[i];
    body << '\n';
    for (const auto& rec : report.at("records")) body << csv_row(rec) << '\n';
  }
  if (spec.out_path == "-") {
    out << body.str();
    return;
  }
  std::ofstream file(spec.out_path, std::ios::binary);
  if (!file) throw InvalidInput("cannot write report to '" + spec.out_path + "'");
  file << body.str();
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::Params: return "params";
    case Command::Vi: return "vi";
    case Command::Verlinde: return "verlinde";
    case Command::Segre: return "segre";
    case Command::Verify: return "verify";
    case Command::Sweep: return "sweep";
    case Command::Fit: return "fit";
    case Command::Calibrate: return "calibrate";
  }
  return "unknown";
}

Command parse_command(const std::string& s) {
  for (Command c : {Command::Params, Command::Vi, Command::Verlinde, Command::Segre, Command::Verify, Command::Sweep,
                    Command::Fit, Command::Calibrate}) {
    if (to_string(c) == s) return c;
  }
  throw InvalidInput("unknown command '" + s + "'");
}

std::vector<std::int64_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  auto parse_one = [&](const std::string& s) { return to_int64(parse_integer(s)); };
  if (dots == std::string::npos) return {parse_one(text)};
  const std::int64_t lo = parse_one(text.substr(0, dots));
  const std::int64_t hi = parse_one(text.substr(dots + 2));
  if (hi < lo) throw InvalidInput("empty range '" + text + "'");
  if (hi - lo > 100000) throw InvalidInput("range '" + text + "' too large");
  std::vector<std::int64_t> out;
  for (std::int64_t v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

std::string resolve_config_path(const std::string& requested) {
  if (!requested.empty()) return requested;
  if (const char* env = std::getenv("SEGVER_CONFIG"); env && *env) return env;
  return "segver-convention.json";
}

int run(const JobSpec& spec, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  // With the report on stdout, the human-readable summary moves to stderr.
  std::ostream& log = spec.out_path == "-" ? err : out;
  try {
    if (spec.format == Format::Csv &&
        (spec.command == Command::Fit || spec.command == Command::Calibrate || spec.command == Command::Vi)) {
      throw InvalidInput("CSV output is only available for params, verlinde, segre, verify and sweep");
    }
    VIOptions vi;
    vi.backend = spec.backend;
    vi.workers = resolve_workers(spec.workers);
    const DNormalizationPolicy policy = policy_of(spec);

    json report{{"schema_version", kSchemaVersion}, {"command", to_string(spec.command)}};
    json job{{"backend", to_string(spec.backend)}, {"policy", policy.key()}};
    if (!spec.g.empty()) job["g"] = range_json(spec.g);
    if (!spec.r.empty()) job["r"] = range_json(spec.r);
    if (!spec.d.empty()) job["d"] = range_json(spec.d);
    if (!spec.ell.empty()) job["ell"] = range_json(spec.ell);
    if (spec.n) job["n"] = *spec.n;
    if (spec.exponent) job["N"] = *spec.exponent;
    report["job"] = job;

    std::vector<Outcome> outcomes;

    if (spec.command == Command::Calibrate) {
      const CalibrationResult result = run_battery(default_search_space(), standard_battery(), vi);
      const auto survivors = result.survivors();
      const auto closed = run_battery(default_search_space(), closed_form_battery(), vi).survivors();
      log << result.matrix();
      json summary{{"tests", result.battery.size()},
                   {"search_space", default_search_space().size()},
                   {"survivors", survivors.size()},
                   {"closed_form_survivors", closed.size()}};
      Outcome o;
      o.record = summary;
      if (survivors.size() == 1) {
        const std::string path = resolve_config_path(spec.config_path);
        save_convention(path, survivors.front(), summary);
        o.record["convention"] = convention_to_json(survivors.front());
        o.record["verdict"] = "pass";
        log << "calibrated convention " << survivors.front().key() << " written to " << path << '\n';
      } else {
        o.record["verdict"] = "fail";
        o.status = Status::Mismatch;
        err << "calibration failure: " << survivors.size() << " conventions pass the battery\n";
      }
      outcomes.push_back(std::move(o));
    } else {
      std::optional<VIConvention> conv;
      if (needs_convention(spec.command)) {
        conv = load_convention(resolve_config_path(spec.config_path));
        report["convention"] = convention_to_json(*conv);
      }
      const TriangleEngine engine(conv.value_or(VIConvention{}), vi, policy);
      const ResultCache cache(spec.cache_dir, err);

      auto cached = [&](const ModuliInput& in, auto&& compute) -> json {
        in.validate();
        const std::string key = "schema=" + std::to_string(kSchemaVersion) + ";command=" + to_string(spec.command) +
                                ";g=" + std::to_string(in.g) + ";r=" + std::to_string(in.r) +
                                ";d=" + std::to_string(in.d) + ";d_norm=" + std::to_string(floor_degree(in)) +
                                ";ell=" + std::to_string(in.level) + ";convention=" + engine.convention().key() +
                                ";backend=" + to_string(spec.backend) + ";policy=" + policy.key();
        if (auto hit = cache.lookup(key)) return *hit;
        json rec = compute();
        cache.store(key, rec);
        return rec;
      };

      switch (spec.command) {
        case Command::Params:
          for (const auto& in : cartesian(spec)) {
            outcomes.push_back(guarded(input_json(in), [&] {
              const std::int64_t dn = spec.d_norm ? *spec.d_norm : floor_degree(in);
              json rec = params_to_json(in, derive_params(in, dn));
              const KClassCurve a = build_alpha(in, derive_params(in, dn));
              rec["alpha"] = json{{"rank", a.rank}, {"degree", a.degree}, {"pushforward_rank", a.pushforward_rank}};
              rec["verdict"] = "pass";
              return rec;
            }));
          }
          break;
        case Command::Vi: {
          require(spec.g, "g");
          require(spec.r, "r");
          require(spec.d, "d");
          if (!spec.n) throw InvalidInput("missing --n");
          for (auto g : spec.g) {
            for (auto r : spec.r) {
              for (auto d : spec.d) {
                json base{{"n", *spec.n}, {"r", r}, {"g", g}, {"d", d}};
                outcomes.push_back(guarded(base, [&] {
                  std::int64_t exponent = 0;
                  if (spec.exponent) {
                    exponent = *spec.exponent;
                  } else {
                    const std::int64_t vdim = static_cast<std::int64_t>(*spec.n) * d - r * (*spec.n - r) * (g - 1);
                    if (r == 0 || vdim % r != 0) throw DegreeMismatch("vdim " + std::to_string(vdim) + " not divisible by r");
                    exponent = vdim / r;
                  }
                  const VIInstance inst(*spec.n, narrow(r, "r"), narrow(g, "g"), d, exponent);
                  json rec = base;
                  rec["N"] = exponent;
                  rec["vdim"] = inst.virtual_dimension();
                  rec["value"] = to_string(vi_sum(inst, *conv, vi));
                  rec["verdict"] = "pass";
                  return rec;
                }));
              }
            }
          }
          break;
        }
        case Command::Verlinde:
          for (const auto& in : cartesian(spec)) {
            outcomes.push_back(guarded(input_json(in), [&] {
              return cached(in, [&] {
                const DerivedParams p = engine.derive_params(in);
                json rec = params_to_json(in, p);
                const Integer v = engine.quot_value(in, p);
                rec["verlinde"] = to_string(v);
                rec["verdict"] = v >= 0 ? "pass" : "fail";
                return rec;
              });
            }));
          }
          break;
        case Command::Segre:
          for (const auto& in : cartesian(spec)) {
            outcomes.push_back(guarded(input_json(in), [&] {
              return cached(in, [&] {
                json rec = params_to_json(in, engine.derive_params(in));
                auto [v, independent] = engine.segre_number(in);
                rec["segre"] = to_string(v);
                rec["independent"] = independent;
                rec["verdict"] = v >= 0 ? "pass" : "fail";
                return rec;
              });
            }));
          }
          break;
        case Command::Verify:
        case Command::Sweep: {
          TriangleOptions topt;
          if (spec.command == Command::Sweep) {
            topt.d_shift = false;
            topt.level_rank = false;
          }
          for (const auto& in : cartesian(spec)) {
            outcomes.push_back(guarded(input_json(in), [&] {
              if (spec.timings) return triangle_to_json(engine.verify_triangle(in, topt), true);
              return cached(in, [&] { return triangle_to_json(engine.verify_triangle(in, topt)); });
            }));
          }
          break;
        }
        case Command::Fit: {
          require(spec.ell, "ell");
          std::vector<int> levels;
          for (auto l : spec.ell) levels.push_back(narrow(l, "ell"));
          for (auto g : spec.g) {
            for (auto r : spec.r) {
              for (auto d : spec.d) {
                json base{{"g", g}, {"r", r}, {"d", d}};
                outcomes.push_back(guarded(base, [&] {
                  ModuliInput{narrow(g, "g"), narrow(r, "r"), d, 1}.validate();
                  return polynomial_to_json(narrow(g, "g"), narrow(r, "r"), d,
                                            engine.fit_level_polynomial(narrow(g, "g"), narrow(r, "r"), d, levels));
                }));
              }
            }
          }
          if (outcomes.empty()) throw InvalidInput("fit needs --g, --r and --d");
          break;
        }
        case Command::Calibrate:
          break;
      }
    }

    json records = json::array();
    bool any_invalid = false;
    bool any_mismatch = false;
    for (auto& o : outcomes) {
      log << line_for(spec.command, o.record) << '\n';
      any_invalid = any_invalid || o.status == Status::Invalid;
      any_mismatch = any_mismatch || o.status == Status::Mismatch;
      records.push_back(std::move(o.record));
    }
    report["records"] = std::move(records);
    report["aggregate"] = (any_invalid || any_mismatch) ? "fail" : "pass";
    if (spec.timings) {
      report["timings"] = json{
          {"total_ms", std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count()}};
    }
    emit(spec, report, out);
    log << "aggregate: " << report["aggregate"].get<std::string>() << " (" << report["records"].size()
        << " records)\n";
    if (any_invalid) return kExitInvalid;
    return any_mismatch ? kExitMismatch : kExitOk;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitMismatch;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verlinde / Quot / Segre triangle engine"};
  app.require_subcommand(1);

  JobSpec spec;
  std::string g, r, d, ell, backend = "exact", format = "json";
  std::optional<int> n;
  std::optional<std::int64_t> exponent, d_norm;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--backend", backend, "exact|float");
    sub->add_option("--workers", spec.workers, "worker threads (default: SEGVER_WORKERS, then all cores)");
    sub->add_option("--out", spec.out_path, "report path, '-' for stdout");
    sub->add_option("--format", format, "json|csv");
    sub->add_option("--config", spec.config_path, "calibration config (default: SEGVER_CONFIG or ./segver-convention.json)");
  };
  auto add_moduli = [&](CLI::App* sub) {
    sub->add_option("--g", g, "genus, value or a..b");
    sub->add_option("--r", r, "rank, value or a..b");
    sub->add_option("--d", d, "degree, value or a..b");
    sub->add_option("--ell", ell, "level, value or a..b");
    sub->add_option("--d-norm", d_norm, "pin the normalized degree d'");
    sub->add_option("--cap", spec.stabilization_cap, "stabilization bump cap");
    sub->add_option("--cache-dir", spec.cache_dir, "result cache directory");
    sub->add_flag("--timings", spec.timings, "include wall-clock timings in the report");
    add_common(sub);
  };

  const std::map<Command, std::string> descriptions{
      {Command::Params, "derived parameters h, r0, d0, n, d', N, vdim"},
      {Command::Verlinde, "Verlinde number by the Quot route"},
      {Command::Segre, "Segre number (independent for r = 1)"},
      {Command::Verify, "full triangle with all consistency checks"},
      {Command::Sweep, "triangle over a grid, without the d-shift and level-rank checks"},
      {Command::Fit, "fit the level polynomial over the given levels"}};
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (Command c : {Command::Params, Command::Verlinde, Command::Segre, Command::Verify, Command::Sweep, Command::Fit}) {
    auto* sub = app.add_subcommand(to_string(c), descriptions.at(c));
    add_moduli(sub);
    subs.emplace_back(sub, c);
  }
  auto* vi_cmd = app.add_subcommand("vi", "int a_r^N on Quot(C^n, r, d) by the root-of-unity sum");
  vi_cmd->add_option("--n", n, "rank of the trivial bundle")->required();
  vi_cmd->add_option("--r", r, "subsheaf rank")->required();
  vi_cmd->add_option("--g", g, "genus")->required();
  vi_cmd->add_option("--d", d, "degree")->required();
  vi_cmd->add_option("--N", exponent, "exponent of a_r (default vdim / r)");
  add_common(vi_cmd);
  subs.emplace_back(vi_cmd, Command::Vi);
  auto* cal = app.add_subcommand("calibrate", "select the root-of-unity sum normalization and write the config");
  add_common(cal);
  subs.emplace_back(cal, Command::Calibrate);

  std::vector<std::string> storage{"segver"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    for (const auto& [sub, c] : subs) {
      if (sub->parsed()) spec.command = c;
    }
    if (!g.empty()) spec.g = parse_range(g);
    if (!r.empty()) spec.r = parse_range(r);
    if (!d.empty()) spec.d = parse_range(d);
    if (!ell.empty()) spec.ell = parse_range(ell);
    spec.n = n;
    spec.exponent = exponent;
    spec.d_norm = d_norm;
    spec.backend = parse_backend(backend);
    if (format == "json") {
      spec.format = Format::Json;
    } else if (format == "csv") {
      spec.format = Format::Csv;
    } else {
      throw InvalidInput("unknown format '" + format + "' (expected json|csv)");
    }
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return run(spec, out, err);
}

}  // namespace segver
