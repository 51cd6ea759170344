// Python bindings. Scenarios and reports cross the boundary as JSON text;
// rationals as strings.

#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "latticeforge/errors.hpp"
#include "latticeforge/lattice.hpp"
#include "latticeforge/scenario.hpp"

namespace py = pybind11;

namespace {

lf::RunOptions options(std::size_t max_enum_rank, std::uint64_t budget) {
  lf::RunOptions o;
  o.max_enum_rank = max_enum_rank;
  o.budget = budget;
  return o;
}

lf::RatMatrix gram_from(const std::vector<std::vector<std::string>>& rows) {
  lf::RatMatrix g(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    lf::require(rows[i].size() == rows.size(), "gram: matrix must be square");
    for (std::size_t j = 0; j < rows.size(); ++j) g(i, j) = lf::parse_rational(rows[i][j]);
  }
  return g;
}

lf::ScaledLattice lattice_from(const std::vector<std::vector<std::string>>& rows) {
  lf::RatMatrix g = gram_from(rows);
  return lf::ScaledLattice{g, lf::IntMatrix::identity(g.rows()), 1};
}

}  // namespace

PYBIND11_MODULE(_latticeforge, m) {
  m.doc() = "Lattices from polynomial and skew-polynomial codes";

  static py::exception<lf::PreconditionError> precondition(m, "PreconditionError", PyExc_ValueError);
  static py::exception<lf::UnsupportedError> unsupported(m, "UnsupportedError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const lf::PreconditionError& e) {
      py::set_error(precondition, e.what());
    } catch (const lf::UnsupportedError& e) {
      py::set_error(unsupported, e.what());
    }
  });

  m.attr("ENUMERATION_RANK_CAP") = lf::kEnumerationRankCap;
  m.attr("DIVISOR_SEARCH_BUDGET") = lf::kDivisorSearchBudget;
  m.attr("FIXTURE_DIR") = LATTICEFORGE_FIXTURE_DIR;

  m.def(
      "run_scenario",
      [](const std::string& text, std::size_t max_enum_rank, std::uint64_t budget) {
        lf::json s = lf::json::parse(text);
        py::gil_scoped_release release;
        return lf::run_scenario(s, options(max_enum_rank, budget)).dump();
      },
      py::arg("scenario_json"), py::arg("max_enum_rank") = lf::kEnumerationRankCap,
      py::arg("budget") = lf::kDivisorSearchBudget, "Run a scenario given as JSON text; returns the report as JSON text.");

  m.def(
      "list_divisors",
      [](const std::string& text, std::uint64_t budget) {
        lf::json s = lf::json::parse(text);
        py::gil_scoped_release release;
        return lf::list_divisors(s, options(lf::kEnumerationRankCap, budget)).dump();
      },
      py::arg("scenario_json"), py::arg("budget") = lf::kDivisorSearchBudget);

  m.def(
      "expectation_mismatches",
      [](const std::string& scenario, const std::string& report) {
        return lf::expectation_mismatches(lf::json::parse(scenario), lf::json::parse(report));
      },
      py::arg("scenario_json"), py::arg("report_json"));

  m.def(
      "factor",
      [](lf::i64 p, const std::vector<lf::i64>& coeffs) {
        std::vector<std::pair<std::vector<lf::i64>, int>> out;
        for (const auto& f : lf::factor(lf::FpPoly(p, coeffs))) out.emplace_back(f.factor.coeffs(), f.multiplicity);
        return out;
      },
      py::arg("p"), py::arg("coeffs"), "Monic irreducible factors over F_p, coefficients low to high.");

  m.def(
      "lattice_invariants",
      [](const std::vector<std::vector<std::string>>& gram) {
        lf::LatticeInvariants inv = lf::invariants(lattice_from(gram));
        py::dict d;
        d["rank"] = inv.rank;
        d["det"] = lf::to_string(inv.det);
        d["integral"] = inv.integral;
        d["even"] = inv.even;
        d["unimodular"] = inv.unimodular;
        return d;
      },
      py::arg("gram"));

  m.def(
      "minimum_and_kissing",
      [](const std::vector<std::vector<std::string>>& gram, std::size_t rank_cap) {
        lf::ScaledLattice l = lattice_from(gram);
        lf::MinimumKissing mk;
        {
          py::gil_scoped_release release;
          mk = lf::minimum_and_kissing(l, rank_cap);
        }
        return std::make_pair(lf::to_string(mk.minimum), mk.kissing);
      },
      py::arg("gram"), py::arg("rank_cap") = lf::kEnumerationRankCap);

  m.def(
      "selfcheck",
      [](const std::string& fixture_dir, bool quick) {
        std::ostringstream log;
        lf::SelfcheckSummary s;
        {
          py::gil_scoped_release release;
          s = lf::selfcheck(fixture_dir, quick, lf::RunOptions{}, log);
        }
        return py::make_tuple(s.passed, s.failed, log.str());
      },
      py::arg("fixture_dir") = std::string(LATTICEFORGE_FIXTURE_DIR), py::arg("quick") = true);
}
