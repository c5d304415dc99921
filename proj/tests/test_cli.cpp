#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

using json = nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

std::string cli_path() {
  const char* p = std::getenv("REALLINES_CLI");
  REQUIRE_MESSAGE(p != nullptr, "REALLINES_CLI must point at the binary");
  return p;
}

RunResult run(const std::string& args) {
  RunResult res;
  std::string cmd = cli_path() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    res.output.append(buf.data(), got);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::filesystem::path tmp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("reallines_test_" + name);
}

}  // namespace

TEST_CASE("count reports the schubert numbers") {
  auto res = run("count --n 2 --deterministic");
  REQUIRE(res.exit_code == 0);
  auto j = json::parse(res.output);
  CHECK(j["schema_version"] == "1");
  CHECK(j["command"] == "count");
  CHECK(j["payload"]["n_complex"] == "27");
  CHECK(j["payload"]["n_euler"] == "3");
  CHECK(j.find("timestamp") == j.end());
  for (const auto& c : j["invariant_checks"]) CHECK(c["pass"] == true);
}

TEST_CASE("count matches the oracle for larger n") {
  auto res = run("count --n 5 --deterministic");
  REQUIRE(res.exit_code == 0);
  auto j = json::parse(res.output);
  CHECK(j["payload"]["n_complex"] == "305093061");
  CHECK(j["payload"]["n_complex_oracle"] == "305093061");
}

TEST_CASE("fixture then solve: fermat cubic") {
  auto path = tmp_file("fermat.json");
  auto fix = run("fixture --name fermat --n 2 --seed 5 --out " +
                 path.string());
  REQUIRE(fix.exit_code == 0);

  auto res = run("solve --input " + path.string() +
                 " --seed 42 --deterministic");
  REQUIRE(res.exit_code == 0);
  auto j = json::parse(res.output);
  CHECK(j["command"] == "solve");
  const auto& p = j["payload"];
  CHECK(p["n_complex_found"] == 27);
  CHECK(p["n_real"] == 3);
  CHECK(p["signed_sum"] == 3);
  CHECK(p["lines"].size() == 3);
  for (const auto& line : p["lines"]) {
    CHECK(line["index"] == 1);
    CHECK(line["segre"] == "hyperbolic");
  }
  std::filesystem::remove(path);
}

TEST_CASE("verify runs the invariant battery") {
  auto path = tmp_file("clebsch.json");
  REQUIRE(run("fixture --name clebsch --n 2 --out " + path.string())
              .exit_code == 0);
  auto res = run("verify --input " + path.string() +
                 " --seed 42 --deterministic");
  REQUIRE(res.exit_code == 0);
  auto j = json::parse(res.output);
  CHECK(j["command"] == "verify");
  CHECK(j["payload"]["n_real"] == 27);
  std::set<std::string> names;
  for (const auto& c : j["invariant_checks"]) {
    names.insert(c["name"].get<std::string>());
    CHECK(c["pass"] == true);
  }
  CHECK(names.count("magic_identity") == 1);
  CHECK(names.count("schlafli_values") == 1);
  CHECK(names.count("segre_index_opposite") == 1);
  CHECK(names.count("projective_invariance") == 1);
  std::filesystem::remove(path);
}

TEST_CASE("congruences table") {
  auto res = run("congruences --n-max 16 --q 3 --deterministic");
  REQUIRE(res.exit_code == 0);
  auto j = json::parse(res.output);
  const auto& p = j["payload"];
  CHECK(p["modulus"] == 8);
  CHECK(p["rows"].size() == 16);
  CHECK(p["mod4_coincide"] == true);
  CHECK(p["n_complex_rotation_match"] == true);
  CHECK(p["n_euler_rotation_match"] == true);
}

TEST_CASE("exit code 2 on malformed input") {
  auto path = tmp_file("bad.json");
  std::ofstream(path) << "{not json";
  CHECK(run("solve --input " + path.string() + " --seed 1").exit_code == 2);
  std::filesystem::remove(path);

  CHECK(run("solve --input /nonexistent.json --seed 1").exit_code == 2);
  // Unknown subcommands and bad flags are parse errors too.
  CHECK(run("frobnicate").exit_code == 2);
  CHECK(run("count --n 0").exit_code == 2);
}

TEST_CASE("exit code 2 when n >= 3 without --slow") {
  auto path = tmp_file("quintic.json");
  REQUIRE(run("fixture --name fermat --n 3 --out " + path.string())
              .exit_code == 0);
  CHECK(run("solve --input " + path.string() + " --seed 1").exit_code == 2);
  std::filesystem::remove(path);
}

TEST_CASE("exit code 3 on a non-generic surface") {
  auto fermat = tmp_file("fermat3.json");
  REQUIRE(run("fixture --name fermat --n 2 --out " + fermat.string())
              .exit_code == 0);
  std::ifstream in(fermat.string());
  auto j = json::parse(in);
  // x0^3 has a non-reduced hyperplane's worth of lines.
  j["terms"] = json::array(
      {{{"exponents", {3, 0, 0, 0}}, {"coeff", "1"}}});
  auto path = tmp_file("singular.json");
  std::ofstream(path) << j.dump();
  CHECK(run("solve --input " + path.string() + " --seed 1").exit_code == 3);
  std::filesystem::remove(fermat);
  std::filesystem::remove(path);
}

TEST_CASE("solve output is deterministic for a fixed seed") {
  auto path = tmp_file("rand.json");
  REQUIRE(run("fixture --name random --n 2 --seed 17 --out " + path.string())
              .exit_code == 0);
  auto a = run("solve --input " + path.string() + " --seed 9 --deterministic");
  auto b = run("solve --input " + path.string() + " --seed 9 --deterministic");
  REQUIRE(a.exit_code == 0);
  CHECK(a.output == b.output);
  std::filesystem::remove(path);
}
