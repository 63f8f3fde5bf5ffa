#pragma once

// Named bundles of checks with a pass/fail line per criterion.

#include <cstdint>
#include <string>
#include <vector>

#include "pseudofin/report.hpp"

namespace pseudofin {

struct SuiteOptions {
  unsigned threads = 1;
  std::uint64_t seed = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  Json details;
  double wall_time_ms = 0;
};

// Frozen regression value: sigma_2 failure density of heisenberg(3,2,1).
inline constexpr const char* kHeisenbergSigma2FailingFraction = "1/13";
inline constexpr const char* kHeisenbergSigma2UnreachableFraction = "8/9";

// Criteria 1..9 of the acceptance list.
CriterionResult run_criterion(int id, const SuiteOptions& opts);

bool is_known_suite(const std::string& name);
// "acceptance" runs 1..9; "quick" runs the subset that finishes in seconds.
std::vector<int> suite_criteria(const std::string& name);

std::vector<CriterionResult> run_suite(const std::string& name, const SuiteOptions& opts);

Json to_json(const CriterionResult& r);

}  // namespace pseudofin
