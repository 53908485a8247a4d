#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gspin {

enum class Outcome { pass, fail, skipped };
const char* outcome_name(Outcome o);

struct CriterionResult {
  int id = 0;
  std::string title;
  Outcome outcome = Outcome::pass;
  std::string detail;
  double seconds = 0;  // wall time, kept out of the JSON report
};

struct AcceptanceConfig {
  std::int64_t budget = 50'000'000;  // Lagrangian search and region cap
  std::int64_t node_budget = 100'000;
  bool parallel = true;
  unsigned seed = 1;
  std::vector<int> only;  // empty: all ten
};

// Runs the criteria in order; `on_result` fires as each one finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

// "PASS  [1] title: detail", with the wall time appended when asked.
std::string format_result(const CriterionResult& r, bool with_time);
// Deterministic for a fixed config.
std::string acceptance_json(const AcceptanceConfig& cfg, const std::vector<CriterionResult>& results);
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace gspin
