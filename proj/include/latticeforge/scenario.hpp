#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "latticeforge/exactmath.hpp"
#include "latticeforge/ringints.hpp"
#include "latticeforge/skewpoly.hpp"

namespace lf {

using json = nlohmann::ordered_json;

struct RunOptions {
  std::size_t max_enum_rank = kEnumerationRankCap;
  std::uint64_t budget = kDivisorSearchBudget;
};

// Scenario kinds: number_field_code, cyclic_algebra_code, raw_quotient,
// factorization_table, skew_divisors.
json load_scenario(const std::filesystem::path& path);
// Throws PreconditionError naming the offending key.
void validate_scenario(const json& s);

json run_scenario(const json& s, const RunOptions& opt = {});
json list_divisors(const json& s, const RunOptions& opt = {});

// Compares report values against the scenario's "expected" block.
std::vector<std::string> expectation_mismatches(const json& scenario, const json& report);

// Deserializers shared with the bindings.
RingPtr parse_field(const json& desc);
FieldElement parse_element(const RingOfIntegers& r, const json& v);
RingAutomorphism parse_automorphism(const RingOfIntegers& r, const json& v);
Fq parse_fq(const json& desc);

std::vector<std::filesystem::path> fixture_paths(const std::filesystem::path& dir);

struct SelfcheckSummary {
  std::size_t passed = 0;
  std::size_t failed = 0;
};
SelfcheckSummary selfcheck(const std::filesystem::path& fixture_dir, bool quick, const RunOptions& opt,
                           std::ostream& log);

}  // namespace lf
