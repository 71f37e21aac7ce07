#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "fracbound/config.hpp"
#include "fracbound/errors.hpp"

using namespace fracbound;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args) {
  const char* exe = std::getenv("FRACBOUND_CLI");
  REQUIRE(exe != nullptr);
  const int st = std::system((std::string(exe) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("fracbound_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const char* kCount = R"(mode: count
d: 1
s: 1.0
grid: {L: 40, N: 512}
potential:
  terms:
    - {shape: well, V0: 10, a: 1}
)";
}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config_text(kCount);
  CHECK(c.mode == "count");
  CHECK(c.N == 512);
  CHECK(c.potential.terms.size() == 1);
  CHECK_NOTHROW(validate(c));

  const ExperimentConfig j = parse_config_text(R"({"mode": "sweep", "d": 2, "s": 1.3, "grid": {"L": 6, "N": 24}})");
  CHECK(j.d == 2);
  CHECK(j.s == 1.3);

  ExperimentConfig bad = c;
  bad.L = 2.5;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = c;
  bad.mode = "plot";
  CHECK_THROWS_AS(validate(bad), Error);
  CHECK_THROWS_AS(parse_config_text("mode: [count"), Error);

  ExperimentConfig o = c;
  apply_grid_override(o, "N=128 L=10");
  CHECK(o.N == 128);
  CHECK(o.L == 10.0);
}

TEST_CASE("count run writes the expected summary") {
  const fs::path d = scratch("count");
  std::ofstream(d / "c.yaml") << kCount;
  CHECK(run("--config " + (d / "c.yaml").string() + " --out " + (d / "out").string()) == 0);
  const auto j = nlohmann::json::parse(slurp(d / "out" / "summary.json"));
  CHECK(j["count"] == 3);
  CHECK(j["schema_version"] == 1);
  CHECK(j.contains("seed"));
  CHECK(fs::exists(d / "out" / "reports.csv"));
}

TEST_CASE("malformed config exits with 2") {
  const fs::path d = scratch("bad");
  std::ofstream(d / "bad.yaml") << "mode: count\ngrid: {L: 40, N: [\n";
  CHECK(run("--config " + (d / "bad.yaml").string() + " --out " + (d / "out").string()) == 2);
  std::ofstream(d / "odd.yaml") << "mode: count\ngrid: {L: 40, N: 511}\n";
  CHECK(run("--config " + (d / "odd.yaml").string() + " --out " + (d / "out").string()) == 2);
  CHECK(run("count --config " + (d / "missing.yaml").string()) == 2);
}

TEST_CASE("reruns are byte-identical") {
  const fs::path d = scratch("repeat");
  std::ofstream(d / "s.yaml") << "mode: sweep\nd: 1\ns: 1.5\ngrid: {L: 20, N: 128}\n"
                                 "potential: {terms: [{shape: gaussian, V0: 4, w: 1}]}\nlambdas: [1, 2]\n";
  for (const char* o : {"a", "b"})
    REQUIRE(run("--config " + (d / "s.yaml").string() + " --seed 5 --out " + (d / o).string()) == 0);
  for (const auto& e : fs::recursive_directory_iterator(d / "a")) {
    if (!e.is_regular_file()) continue;
    const fs::path other = d / "b" / fs::relative(e.path(), d / "a");
    CHECK(slurp(e.path()) == slurp(other));
  }
  CHECK(fs::exists(d / "a" / "curves" / "counts_lambda1.tsv"));
}

TEST_CASE("verify mode reports violations through the exit code") {
  const fs::path d = scratch("verify");
  const std::string base = "mode: verify\nd: 1\ns: 1.0\ngrid: {L: 20, N: 128}\n"
                           "potential: {terms: [{shape: gaussian, V0: 8, w: 1}]}\ntheorems: [T1.1-nonint, Bargmann]\n";
  std::ofstream(d / "ok.yaml") << base;
  CHECK(run("--config " + (d / "ok.yaml").string() + " --out " + (d / "ok").string()) == 0);
  std::ofstream(d / "tight.yaml") << base << "constants: {\"T1.1-nonint|d=1|s=1\": 1e-6}\n";
  CHECK(run("--config " + (d / "tight.yaml").string() + " --out " + (d / "tight").string()) == 1);
}

TEST_CASE("selftest passes at defaults") {
  const fs::path d = scratch("self");
  CHECK(run("selftest --out " + (d / "out").string()) == 0);
}
