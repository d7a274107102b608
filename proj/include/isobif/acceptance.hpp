#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "isobif/config.hpp"

namespace isobif {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs the ten acceptance criteria, printing one PASS/FAIL line each as it
// finishes. An exception inside a criterion counts as FAIL.
std::vector<CriterionResult> run_acceptance(std::ostream& out, const RunConfig& config);

}  // namespace isobif
