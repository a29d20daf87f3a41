#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

#include "segver/job.hpp"

using namespace segver;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Scratch directory holding a calibrated config, shared by the CLI tests.
struct Workspace {
  fs::path dir;
  std::string config;

  Workspace() {
    dir = fs::temp_directory_path() / ("segver-cli-test-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    config = (dir / "convention.json").string();
    const Run r = cli({"calibrate", "--config", config});
    REQUIRE(r.code == 0);
  }
  ~Workspace() { fs::remove_all(dir); }

  std::string path(const std::string& name) const { return (dir / name).string(); }
};

Workspace& ws() {
  static Workspace w;
  return w;
}

}  // namespace

TEST_CASE("parse_range") {
  CHECK(parse_range("3") == std::vector<std::int64_t>{3});
  CHECK(parse_range("1..4") == std::vector<std::int64_t>{1, 2, 3, 4});
  CHECK(parse_range("-2..0") == std::vector<std::int64_t>{-2, -1, 0});
  CHECK_THROWS(parse_range("4..1"));
  CHECK_THROWS(parse_range("x"));
}

TEST_CASE("verify over a level range") {
  const std::string out = ws().path("t.json");
  const Run r = cli({"verify", "--g", "2", "--r", "1", "--d", "0", "--ell", "1..4", "--out", out, "--config", ws().config});
  CHECK(r.code == 0);
  const auto report = nlohmann::json::parse(slurp(out));
  CHECK(report["schema_version"] == 1);
  CHECK(report["aggregate"] == "pass");
  CHECK(report["convention"]["key"] == "root_target=-1;phase=1;tau=0");
  REQUIRE(report["records"].size() == 4);
  const char* expected[] = {"4", "9", "16", "25"};
  for (int i = 0; i < 4; ++i) {
    const auto& rec = report["records"][i];
    CHECK(rec["verdict"] == "pass");
    CHECK(rec["verlinde"] == expected[i]);
    CHECK(rec["quot"] == expected[i]);
    CHECK(rec["segre"] == expected[i]);
  }
}

TEST_CASE("params") {
  const Run r = cli({"params", "--g", "2", "--r", "2", "--d", "1", "--ell", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("h=1 r0=2 d0=1 n=4 d'=5 N=8 vdim=16") != std::string::npos);
}

TEST_CASE("invalid input exits 2") {
  CHECK(cli({"verify", "--g", "1", "--r", "1", "--d", "0", "--ell", "1", "--config", ws().config}).code == 2);
  CHECK(cli({"verify", "--g", "2", "--r", "1", "--d", "0"}).code == 2);
  CHECK(cli({"verify", "--bogus"}).code == 2);
  CHECK(cli({"verify", "--g", "2", "--r", "1", "--d", "0", "--ell", "1", "--backend", "quantum"}).code == 2);
  const Run missing = cli({"verify", "--g", "2", "--r", "1", "--d", "0", "--ell", "1", "--config", ws().path("nope.json")});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("segver calibrate") != std::string::npos);
  CHECK(cli({"vi", "--n", "4", "--r", "2", "--g", "2", "--d", "3", "--N", "5", "--config", ws().config}).code == 2);
}

TEST_CASE("partial failures still write every record") {
  const std::string out = ws().path("partial.json");
  const Run r = cli({"verify", "--g", "1..2", "--r", "1", "--d", "0", "--ell", "1", "--out", out, "--config", ws().config});
  CHECK(r.code == 2);
  const auto report = nlohmann::json::parse(slurp(out));
  REQUIRE(report["records"].size() == 2);
  CHECK(report["records"][0].contains("error"));
  CHECK(report["records"][1]["verdict"] == "pass");
  CHECK(report["aggregate"] == "fail");
}

TEST_CASE("vi command") {
  const Run r = cli({"vi", "--n", "3", "--r", "1", "--g", "2", "--d", "4", "--config", ws().config});
  CHECK(r.code == 0);
  CHECK(r.out.find("N=10 value=9") != std::string::npos);
}

TEST_CASE("cache") {
  const std::string cache = ws().path("cache");
  fs::remove_all(cache);
  const std::vector<std::string> job{"verify", "--g", "2", "--r", "2", "--d", "1", "--ell", "1", "--out", "-",
                                     "--cache-dir", cache, "--config", ws().config};
  const Run first = cli(job);
  CHECK(first.code == 0);
  CHECK(first.err.find("cache hit") == std::string::npos);
  const Run second = cli(job);
  CHECK(second.code == 0);
  CHECK(second.err.find("cache hit") != std::string::npos);
  CHECK(first.out == second.out);

  SUBCASE("changed convention misses") {
    const std::string other = ws().path("other.json");
    std::ofstream(other) << R"({"schema_version":1,"convention":{"root_target":1,"phase":1,"tau":0}})";
    auto j = job;
    j.back() = other;
    const Run r = cli(j);
    CHECK(r.err.find("cache hit") == std::string::npos);
  }
  SUBCASE("corrupt entries are ignored") {
    for (const auto& e : fs::directory_iterator(cache)) std::ofstream(e.path()) << "{not json";
    const Run r = cli(job);
    CHECK(r.code == 0);
    CHECK(r.err.find("warning: ignoring corrupt cache entry") != std::string::npos);
    CHECK(r.out == first.out);
    CHECK(cli(job).err.find("cache hit") != std::string::npos);
  }
  SUBCASE("cleared directory recomputes") {
    fs::remove_all(cache);
    const Run r = cli(job);
    CHECK(r.err.find("cache hit") == std::string::npos);
    CHECK(r.out == first.out);
  }
}

TEST_CASE("csv and json carry the same numbers") {
  const std::vector<std::string> base{"sweep", "--g", "2", "--r", "1..2", "--d", "0..1", "--ell", "1..2", "--config",
                                      ws().config, "--out"};
  auto j = base;
  j.push_back(ws().path("s.json"));
  auto c = base;
  c.push_back(ws().path("s.csv"));
  c.push_back("--format");
  c.push_back("csv");
  REQUIRE(cli(j).code == 0);
  REQUIRE(cli(c).code == 0);
  const auto report = nlohmann::json::parse(slurp(ws().path("s.json")));
  std::istringstream csv(slurp(ws().path("s.csv")));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "g,r,d,d_norm,ell,n,N,verlinde,quot,segre,independent,verdict");
  for (const auto& rec : report["records"]) {
    REQUIRE(std::getline(csv, line));
    std::ostringstream expect;
    expect << rec["g"] << ',' << rec["r"] << ',' << rec["d"] << ',' << rec["d_norm"] << ',' << rec["ell"] << ','
           << rec["n"] << ',' << rec["N"] << ',' << rec["verlinde"].get<std::string>() << ','
           << rec["quot"].get<std::string>() << ',' << rec["segre"].get<std::string>() << ','
           << (rec["independent"].get<bool>() ? "true" : "false") << ',' << rec["verdict"].get<std::string>();
    CHECK(line == expect.str());
  }
  CHECK(!std::getline(csv, line));
}

TEST_CASE("reports are byte-identical across worker counts") {
  std::string reference;
  for (const char* w : {"1", "2", "8"}) {
    const std::string out = ws().path(std::string("w") + w + ".json");
    REQUIRE(cli({"verify", "--g", "2", "--r", "2..3", "--d", "0..1", "--ell", "1", "--workers", w, "--out", out,
                 "--config", ws().config})
                .code == 0);
    const std::string body = slurp(out);
    if (reference.empty()) reference = body;
    CHECK(body == reference);
  }
}

TEST_CASE("fit") {
  const Run r = cli({"fit", "--g", "2", "--r", "1", "--d", "0", "--ell", "1..5", "--config", ws().config});
  CHECK(r.code == 0);
  CHECK(r.out.find("degree=2") != std::string::npos);
  CHECK(r.out.find("coefficients=[1, 2, 1]") != std::string::npos);
}

TEST_CASE("config path resolution") {
  CHECK(resolve_config_path("x.json") == "x.json");
  ::setenv("SEGVER_CONFIG", "from-env.json", 1);
  CHECK(resolve_config_path("") == "from-env.json");
  ::unsetenv("SEGVER_CONFIG");
  CHECK(resolve_config_path("") == "segver-convention.json");
}
