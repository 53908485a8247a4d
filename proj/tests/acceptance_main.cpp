#include <cstdio>

#include "gspin/acceptance.hpp"

int main() {
  gspin::AcceptanceConfig cfg;
  auto results = gspin::run_acceptance(cfg, [](const gspin::CriterionResult& r) {
    std::printf("%s\n", gspin::format_result(r, true).c_str());
    std::fflush(stdout);
  });
  int failed = 0;
  for (auto& r : results) failed += r.outcome == gspin::Outcome::fail;
  std::printf("%d of %zu criteria failed\n", failed, results.size());
  return failed ? 1 : 0;
}
