#include <iostream>

#include "q1d/verification/acceptance.hpp"

int main() {
  const auto results = q1d::verification::run_acceptance({Q1D_DATA_DIR});
  std::cout << q1d::verification::format_acceptance(results);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << (results.size() - static_cast<std::size_t>(failed)) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
