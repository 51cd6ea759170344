// latticeforge: run construction scenarios and emit certificate reports.
//
//   latticeforge run SCENARIO.json [--out FILE] [--max-enum-rank N] [--budget N]
//   latticeforge list-divisors SCENARIO.json [--budget N]
//   latticeforge selfcheck [--quick] [--fixtures DIR]
//
// Exit codes: 0 success, 2 precondition or schema failure, 1 internal error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "latticeforge/errors.hpp"
#include "latticeforge/scenario.hpp"

namespace {

int emit(const lf::json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::ofstream f(out);
  if (!f) {
    std::cerr << "error: cannot write " << out << "\n";
    return 2;
  }
  f << j.dump(2) << "\n";
  return 0;
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const lf::PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 2;
  } catch (const lf::UnsupportedError& e) {
    std::cerr << "unsupported input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattices from polynomial and skew-polynomial codes"};
  app.require_subcommand(1);

  lf::RunOptions opt;
  std::string scenario, out, fixtures = LATTICEFORGE_FIXTURE_DIR;
  bool quick = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--max-enum-rank", opt.max_enum_rank, "Largest rank for short-vector enumeration")
        ->capture_default_str();
    sub->add_option("--budget", opt.budget, "Candidate budget for skew divisor search")->capture_default_str();
  };

  auto* run = app.add_subcommand("run", "Run a scenario and print its report");
  run->add_option("scenario", scenario, "Scenario JSON file")->required();
  run->add_option("--out", out, "Write the report here instead of stdout");
  add_common(run);

  auto* ld = app.add_subcommand("list-divisors", "Tabulate generator divisors with duality flags");
  ld->add_option("scenario", scenario, "Scenario JSON file")->required();
  ld->add_option("--out", out, "Write the table here instead of stdout");
  add_common(ld);

  auto* sc = app.add_subcommand("selfcheck", "Run the fixture suite and the property battery");
  sc->add_flag("--quick", quick, "Fixtures only");
  sc->add_option("--fixtures", fixtures, "Fixture directory")->capture_default_str();
  add_common(sc);

  CLI11_PARSE(app, argc, argv);

  if (*run) return guarded([&] { return emit(lf::run_scenario(lf::load_scenario(scenario), opt), out); });
  if (*ld) return guarded([&] { return emit(lf::list_divisors(lf::load_scenario(scenario), opt), out); });
  return guarded([&] {
    auto sum = lf::selfcheck(fixtures, quick, opt, std::cout);
    return sum.failed == 0 ? 0 : 1;
  });
}
