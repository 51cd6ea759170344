// Acceptance run: one line per criterion.
//
//   acceptance [N]   run all criteria, or only criterion N
//
// A criterion listed in kKnownFailures is expected to fail; the run exits
// nonzero on any unexpected failure and on any unexpected pass.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "latticeforge/properties.hpp"
#include "latticeforge/scenario.hpp"

using namespace lf;

namespace {

const std::filesystem::path kFixtures = LATTICEFORGE_FIXTURE_DIR;

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      notes.push_back(what);
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;
  std::function<void(Outcome&)> body;
};

// Criteria whose stated values do not hold; the reason is printed with the FAIL line.
const std::map<int, std::string> kKnownFailures = {
    {3, "the zeta_13 quaternion lattice has 312 roots (A12+A12), not 364"},
    {6, "the p = 17 lattice is odd unimodular with minimum 2 and no norm-1 vector, so it is not Z^32"},
};

json run_fixture(const std::string& name, const std::function<void(json&)>& edit = {}) {
  json s = load_scenario(kFixtures / (name + ".json"));
  if (edit) edit(s);
  return run_scenario(s)["summary"];
}

std::string str(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void expect_eq(Outcome& o, const std::string& where, const json& got, const json& want) {
  o.expect(got == want, where + ": got " + str(got) + ", expected " + str(want));
}

void check_unimodular(Outcome& o, const std::string& where, const json& s, int rank, bool even) {
  expect_eq(o, where + " rank", s["rank"], rank);
  expect_eq(o, where + " det", s["det"], "1");
  expect_eq(o, where + " integral", s["integral"], true);
  expect_eq(o, where + " unimodular", s["unimodular"], true);
  expect_eq(o, where + " even", s["even"], even);
}

void check_min_kissing(Outcome& o, const std::string& where, const json& s, const std::string& min, std::size_t kiss) {
  expect_eq(o, where + " minimum", s.value("minimum", json()), min);
  expect_eq(o, where + " kissing", s.value("kissing", json()), kiss);
}

// Factor pairs g_* g of the twelve table rows, by fixture and prime.
struct TableRow {
  i64 p;
  std::string a, b;
};
const std::vector<std::pair<std::string, std::vector<TableRow>>> kTable = {
    {"table_x4p1",
     {{3, "X^2 + X + 2", "X^2 + 2*X + 2"},
      {5, "X^2 + 2", "X^2 + 3"},
      {11, "X^2 + 3*X + 10", "X^2 + 8*X + 10"},
      {13, "X^2 + 5", "X^2 + 8"},
      {19, "X^2 + 6*X + 18", "X^2 + 13*X + 18"}}},
    {"table_x8p1",
     {{3, "X^4 + X^2 + 2", "X^4 + 2*X^2 + 2"}, {5, "X^4 + 2", "X^4 + 3"}, {11, "X^4 + 3*X^2 + 10", "X^4 + 8*X^2 + 10"}}},
    {"table_phi9", {{7, "X^3 + 3", "X^3 + 5"}, {13, "X^3 + 4", "X^3 + 10"}}},
    {"table_phi7", {{2, "X^3 + X + 1", "X^3 + X^2 + 1"}, {11, "X^3 + 5*X^2 + 4*X + 10", "X^3 + 7*X^2 + 6*X + 10"}}},
};

void criterion1(Outcome& o) {
  std::size_t rows = 0;
  for (const auto& [name, expected] : kTable) {
    json report = run_scenario(load_scenario(kFixtures / (name + ".json")));
    const json& tables = report["summary"]["rows"];
    for (const auto& row : expected) {
      ++rows;
      std::string where = name + " p=" + std::to_string(row.p);
      const json* found = nullptr;
      for (const auto& t : tables)
        if (t["p"] == row.p) found = &t;
      if (!found) {
        o.expect(false, where + ": row missing");
        continue;
      }
      std::set<std::set<std::string>> pairs;
      for (const auto& pr : (*found)["self_dual_pairs"]) pairs.insert({pr[0].get<std::string>(), pr[1].get<std::string>()});
      o.expect(pairs.count({row.a, row.b}) == 1, where + ": pair (" + row.a + ")(" + row.b + ") not flagged self-dual");
    }
  }
  expect_eq(o, "row count", rows, 12);
}

void criterion2(Outcome& o) {
  json s = run_fixture("e8_zeta24");
  expect_eq(o, "g", s["g"], "X^2 + X + 2");
  expect_eq(o, "self_dual", s["self_dual"], true);
  check_unimodular(o, "zeta_24", s, 8, true);
  check_min_kissing(o, "zeta_24", s, "2", 240);
  expect_eq(o, "certificate", s["certificate"], "E8");
  expect_eq(o, "certificate passed", s["certificate_passed"], true);
}

void criterion3(Outcome& o) {
  json a = run_fixture("quaternion_zeta5");
  check_unimodular(o, "zeta_5", a, 8, true);
  expect_eq(o, "zeta_5 certificate", a["certificate"], "E8");
  expect_eq(o, "zeta_5 certificate passed", a["certificate_passed"], true);
  json b = run_fixture("quaternion_zeta13");
  check_unimodular(o, "zeta_13", b, 24, true);
  check_min_kissing(o, "zeta_13", b, "2", 364);
}

void criterion4(Outcome& o) {
  json s = run_fixture("z4_sqrtm5", [](json& j) { j["analysis"]["named"] = "Zn"; });
  check_unimodular(o, "sqrt(-5)", s, 4, false);
  check_min_kissing(o, "sqrt(-5)", s, "1", 8);
  expect_eq(o, "certificate passed", s["certificate_passed"], true);
}

void criterion5(Outcome& o) {
  json s = run_fixture("zeta5_cyclic");
  check_unimodular(o, "zeta_5 cyclic", s, 16, true);
  check_min_kissing(o, "zeta_5 cyclic", s, "2", 480);
}

void criterion6(Outcome& o) {
  json s = run_fixture("z32_real17", [](json& j) {
    j["analysis"]["count_norm"] = "1";
    j.erase("expected");
  });
  expect_eq(o, "rank", s["rank"], 32);
  expect_eq(o, "det", s["det"], "1");
  expect_eq(o, "unimodular", s["unimodular"], true);
  json n1 = s.value("vectors_of_norm_1", json());
  o.expect(n1.is_number() && n1.get<std::size_t>() > 0, "norm-1 vectors: " + str(n1) + " (a witness is required)");
}

void criterion7(Outcome& o) {
  // omega = (1 + sqrt -3)/2 reduces to w in F_9; -(1 + w) = 2w + 2 and 1 - w = 2w + 1 mod 3.
  json s = run_fixture("inert_sqrtm3_sqrt2");
  expect_eq(o, "g", s["g"], "X + (2*w + 2)");
  expect_eq(o, "g_tau,lambda", s["g_tau"], "X + (2*w + 1)");
  expect_eq(o, "g g_tau,lambda", s["central"], "X^2 + 1");
  expect_eq(o, "self_dual", s["self_dual"], true);
  check_unimodular(o, "inert", s, 8, true);
  expect_eq(o, "certificate", s["certificate"], "E8");
  expect_eq(o, "certificate passed", s["certificate_passed"], true);
}

void criterion8(Outcome& o) {
  const std::vector<std::pair<std::string, int>> cases{{"zeta8_p11", 40}, {"zeta8_p13", 48}, {"zeta8_p19", 72}};
  for (const auto& [name, rank] : cases) {
    json s = run_fixture(name);
    check_unimodular(o, name, s, rank, true);
    expect_eq(o, name + " enumeration", s.value("enumeration", json()), "skipped");
  }
}

void criterion9(Outcome& o) {
  auto results = run_property_suites(kPropertySeed, kPropertyCases);
  expect_eq(o, "suite count", results.size(), 6);
  for (const auto& r : results) {
    o.expect(r.cases >= 100, r.name + ": only " + std::to_string(r.cases) + " cases");
    o.expect(r.failures == 0, r.name + ": " + std::to_string(r.failures) + " failures, first: " + r.first_failure);
  }
}

const std::vector<Criterion> kCriteria = {
    {1, "factorization table, twelve rows", 1.0, criterion1},
    {2, "E8 from Q(zeta_24), p = 3", 10.0, criterion2},
    {3, "quaternion algebras over Q(zeta_5) and Q(zeta_13)", 60.0, criterion3},
    {4, "Z^4 from Q(sqrt -5)", 1.0, criterion4},
    {5, "rank 16 from the zeta_5 cyclic algebra", 30.0, criterion5},
    {6, "rank 32 from Q(zeta_17)^+", 120.0, criterion6},
    {7, "E8 from Q(sqrt -3, sqrt 2), inert prime", 10.0, criterion7},
    {8, "det 1 in ranks 40, 48, 72", 600.0, criterion8},
    {9, "property suites", 600.0, criterion9},
};

}  // namespace

int main(int argc, char** argv) {
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int unexpected = 0;
  for (const auto& c : kCriteria) {
    if (only && c.id != only) continue;
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_seconds) {
      std::ostringstream os;
      os << "runtime " << secs << " s over the " << c.limit_seconds << " s limit";
      o.expect(false, os.str());
    }
    auto known = kKnownFailures.find(c.id);
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << "criterion " << c.id << ": ";
    if (o.passed && known == kKnownFailures.end()) {
      line << "PASS";
    } else if (o.passed) {
      line << "UNEXPECTED PASS (listed as known failure)";
      ++unexpected;
    } else if (known != kKnownFailures.end()) {
      line << "FAIL (known: " << known->second << ")";
    } else {
      line << "FAIL";
      ++unexpected;
    }
    line << " | " << c.title << " | " << secs << " s, limit " << c.limit_seconds << " s";
    for (const auto& n : o.notes) line << " | " << n;
    std::cout << line.str() << std::endl;
  }
  return unexpected == 0 ? 0 : 1;
}
