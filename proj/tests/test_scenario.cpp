#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "latticeforge/errors.hpp"
#include "latticeforge/scenario.hpp"

using namespace lf;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = LATTICEFORGE_FIXTURE_DIR;

json fixture(const std::string& name) { return load_scenario(kFixtures / (name + ".json")); }

fs::path write_temp(const std::string& name, const std::string& text) {
  fs::path dir = fs::temp_directory_path() / "latticeforge_tests";
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

int cli(const std::string& args) {
  std::string cmd = std::string(LATTICEFORGE_CLI) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string precondition_message(const json& s) {
  try {
    run_scenario(s);
  } catch (const PreconditionError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("every fixture reproduces its expected values") {
  auto paths = fixture_paths(kFixtures);
  CHECK(paths.size() >= 20);
  for (const auto& p : paths) {
    json s = load_scenario(p);
    json report = run_scenario(s);
    auto bad = expectation_mismatches(s, report);
    CHECK_MESSAGE(bad.empty(), p.filename().string() << ": " << (bad.empty() ? "" : bad.front()));
  }
}

TEST_CASE("reports are deterministic") {
  for (const char* name : {"quaternion_zeta5", "table_x8p1", "inert_sqrtm3_sqrt2", "f2_eight"}) {
    json s = fixture(name);
    CHECK(run_scenario(s).dump() == run_scenario(s).dump());
  }
}

TEST_CASE("reports echo the input without the expected block") {
  json s = fixture("quaternion_zeta5");
  json r = run_scenario(s);
  CHECK(r["scenario"] == "quaternion_zeta5");
  CHECK(r["kind"] == "cyclic_algebra_code");
  CHECK_FALSE(r["input"].contains("expected"));
  CHECK(r["input"]["p"] == 5);
  CHECK(r["summary"]["kissing"] == 240);
}

TEST_CASE("schema errors name the offending key") {
  json s = fixture("z4_sqrtm5");
  json f = s;
  f["lambda"] = 0.5;
  CHECK_THROWS_AS(validate_scenario(f), PreconditionError);
  json m = s;
  m.erase("p");
  try {
    validate_scenario(m);
    FAIL("missing key accepted");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("\"p\"") != std::string::npos);
  }
  json k = s;
  k["kind"] = "spherical_code";
  CHECK_THROWS_AS(validate_scenario(k), PreconditionError);
  CHECK_THROWS_AS(load_scenario(write_temp("broken.json", "{\"kind\": ")), PreconditionError);
}

TEST_CASE("a wrong expectation is reported by name") {
  json s = fixture("quaternion_zeta5");
  s["expected"]["kissing"] = 238;
  auto bad = expectation_mismatches(s, run_scenario(s));
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].find("kissing") != std::string::npos);
}

TEST_CASE("list_divisors on X^4 + 1 over F_3") {
  json t = list_divisors(fixture("table_x4p1"));
  const json& row = t["tables"][0];
  CHECK(row["p"] == 3);
  REQUIRE(row["divisors"].size() == 4);
  std::size_t self_dual = 0;
  for (const auto& d : row["divisors"]) self_dual += d["self_dual"].get<bool>();
  CHECK(self_dual == 2);
}

TEST_CASE("list_divisors on an irreducible residue polynomial") {
  json s = json::parse(R"({"name": "phi5_mod2", "kind": "number_field_code", "field": {"cyclotomic": 5},
    "p": 2, "ideal": "p", "lambda": "1", "code": {"generator_polynomial": [1, 1, 1, 1, 1]}})");
  json t = list_divisors(s);
  CHECK(t["mu"] == "X^4 + X^3 + X^2 + X + 1");
  REQUIRE(t["divisors"].size() == 2);
  for (const auto& d : t["divisors"]) CHECK_FALSE(d["self_dual"].get<bool>());
}

TEST_CASE("list_divisors on a skew central binomial") {
  json t = list_divisors(fixture("x2p1_f5"));
  std::vector<std::string> sd;
  for (const auto& d : t["divisors"])
    if (d["self_dual"].get<bool>()) sd.push_back(d["g"].get<std::string>());
  CHECK(sd == std::vector<std::string>{"X + 2", "X + 3"});
}

TEST_CASE("failed hypotheses surface as precondition errors") {
  json s = fixture("quaternion_zeta5");
  s["lambda"] = "5";
  CHECK(precondition_message(s).find("residue form") != std::string::npos);
  json c = fixture("z4_sqrtm5");
  c["code"] = {{"generator_polynomial", json::array({1, 1, 1})}};
  CHECK_FALSE(precondition_message(c).empty());
}

TEST_CASE("command line exit codes") {
  fs::path out = fs::temp_directory_path() / "latticeforge_tests" / "report.json";
  fs::create_directories(out.parent_path());
  CHECK(cli("run " + (kFixtures / "f7_squared.json").string() + " --out " + out.string()) == 0);
  json r = json::parse(std::ifstream(out));
  CHECK(r["scenario"] == "f7_squared");

  json bad = fixture("f7_squared");
  bad["p"] = 7.0;
  std::ostringstream text;
  text << bad.dump();
  CHECK(cli("run " + write_temp("float.json", text.str()).string()) == 2);
  CHECK(cli("run /nonexistent/scenario.json") == 2);
  CHECK(cli("list-divisors " + (kFixtures / "x2p1_f5.json").string()) == 0);
  CHECK(cli("frobnicate") != 0);

  fs::path dir = fs::temp_directory_path() / "latticeforge_tests" / "fixtures";
  fs::create_directories(dir);
  json wrong = fixture("x2p1_f5");
  wrong["expected"]["divisor_count"] = 5;
  std::ofstream(dir / "wrong.json") << wrong.dump(2);
  CHECK(cli("selfcheck --quick --fixtures " + dir.string()) == 1);
  fs::remove(dir / "wrong.json");
  fs::copy_file(kFixtures / "x2p1_f5.json", dir / "x2p1_f5.json", fs::copy_options::overwrite_existing);
  CHECK(cli("selfcheck --quick --fixtures " + dir.string()) == 0);
}
