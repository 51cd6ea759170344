#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lf {

inline constexpr std::uint64_t kPropertySeed = 0x1a77'1ce5'0f0bULL;
inline constexpr std::size_t kPropertyCases = 100;

struct PropertyResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
};

// Randomized invariant batteries, each with `cases` instances drawn from a
// generator seeded with `seed`:
//   thm_gamma, radical_two_routes, trace_form_determinant, skew_division,
//   g_tau_identity, residue_round_trip.
std::vector<PropertyResult> run_property_suites(std::uint64_t seed, std::size_t cases);
PropertyResult run_property_suite(const std::string& name, std::uint64_t seed, std::size_t cases);

}  // namespace lf
