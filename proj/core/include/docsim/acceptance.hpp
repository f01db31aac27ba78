#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace docsim {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs the whole acceptance suite, streaming one PASS/FAIL line per
/// criterion to `out`. Returns every result; the suite passes iff all do.
std::vector<CriterionResult> run_acceptance(std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace docsim
