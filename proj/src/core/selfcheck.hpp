#pragma once

#include <string>
#include <vector>

namespace l3s3tv {

struct CheckResult {
  std::string name;
  bool passed = false;
  // How far the check is from its threshold, in the check's own units;
  // positive means passing with room.
  double margin = 0.0;
  std::string detail;
};

struct SelfcheckReport {
  std::vector<CheckResult> checks;
  bool all_passed = false;
  std::string text() const;
};

// Re-derives key numerical claims against the slow independent oracles:
// column and singular-value shrinkage optimality, triangle inequality of the
// l2,log norm, B-solve vs a dense solver, difference-operator adjointness,
// transform round trips, and the Monte-Carlo expectation bounds. `deep`
// multiplies the sample counts.
SelfcheckReport run_selfcheck(bool deep);

}  // namespace l3s3tv
