#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hcdyn {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool correct = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  /// One line per sub-check, plus informational notes.
  std::vector<std::string> details;

  bool within_budget() const noexcept { return seconds <= budget_seconds; }
  bool passed() const noexcept { return correct && within_budget(); }
};

inline constexpr std::uint64_t kDefaultSeed = 0x5eed2024ULL;

CriterionResult check_special_values();
CriterionResult check_oracle_equivalence();
CriterionResult check_invariance_suites(std::uint64_t seed = kDefaultSeed);
CriterionResult check_limit_theorems(std::uint64_t seed = kDefaultSeed);
CriterionResult check_period_two();
CriterionResult check_contraction(std::uint64_t seed = kDefaultSeed);
CriterionResult check_eigenvalues(std::uint64_t seed = kDefaultSeed);
CriterionResult check_lift(std::uint64_t seed = kDefaultSeed);

std::vector<CriterionResult> run_all_checks(std::uint64_t seed = kDefaultSeed);

/// "PASS  3  invariance suites  (1.234 s, budget 10 s)" followed by indented details.
std::string format_result(const CriterionResult& r, bool with_details = true);

}  // namespace hcdyn
