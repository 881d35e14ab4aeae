#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace ale {

struct AcceptanceCheck {
  std::string name;  // identity or oracle the value is checked against
  double computed = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct AcceptanceCriterion {
  int index = 0;
  std::string name;
  bool pass = false;
  std::vector<AcceptanceCheck> checks;
};

// The ten-point verification suite. Criterion 10 re-runs the other nine and
// byte-compares the serialized summaries.
std::vector<AcceptanceCriterion> run_acceptance_suite();

nlohmann::json acceptance_summary_json(
    const std::vector<AcceptanceCriterion>& criteria);

}  // namespace ale
