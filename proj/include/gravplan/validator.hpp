#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gravplan/pddl/grounder.hpp"
#include "gravplan/plan.hpp"
#include "gravplan/state.hpp"
#include "json.hpp"

namespace gravplan {

/// Plans that cannot be simulated at all (off-grid timestamps).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ValidationFailure {
  double time = 0.0;
  std::string action;
  std::string violated;
};

struct ValidationReport {
  bool valid = false;
  std::optional<ValidationFailure> failure;
  std::vector<TraceEntry> trace;
  HybridState final_state;
  bool goal_satisfied = false;
  double makespan = 0.0;
};

/// Replays the plan on the delta grid: advance to each timestamp, apply the
/// action, stabilize events; then advance to the makespan and test the goal.
ValidationReport validate_plan(const GroundedTask& task, const Plan& plan, double delta);

std::string format_report(const ValidationReport& report);
nlohmann::json state_to_json(const GroundedTask& task, const HybridState& s);
nlohmann::json report_to_json(const GroundedTask& task, const ValidationReport& report);

}  // namespace gravplan
