// Acceptance gate: runs every criterion and exits nonzero on any failure.

#include <cstdio>
#include <iostream>

#include "docsim/acceptance.hpp"

int main() {
  const auto results = docsim::run_acceptance(std::cout);
  int failed = 0;
  for (const auto& r : results) {
    if (!r.passed) ++failed;
  }
  if (failed) {
    std::cout << "\n" << failed << " criterion(s) FAILED\n";
    return 1;
  }
  std::cout << "\nall " << results.size() << " acceptance criteria passed\n";
  return 0;
}
