#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gravplan {

struct TimedAction {
  double time = 0.0;
  std::string name;
  std::vector<std::string> args;

  std::string label() const;
  bool operator==(const TimedAction&) const = default;
};

/// Timed happenings; `end_time` marks when the goal is checked if later
/// than the last action (the plan may end with waiting).
struct Plan {
  std::vector<TimedAction> actions;
  std::optional<double> end_time;

  double makespan() const;
  bool operator==(const Plan&) const = default;
};

/// An action or triggered event, as it appears in an annotated plan.
struct TraceEntry {
  double time = 0.0;
  std::string name;
  std::vector<std::string> args;
  bool is_event = false;

  std::string label() const;
  bool operator==(const TraceEntry&) const = default;
};

class PlanFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_time(double t);

/// Reads `<time>: (<name> <args...>)` lines. Comment lines start with `;`;
/// `; makespan: <t>` sets the end time, other comments (event annotations)
/// are skipped.
Plan parse_plan(std::string_view text);

/// Writes the plan, interleaving `;<time>: (<event> ...)` annotations when a
/// trace is given.
std::string format_plan(const Plan& plan, const std::vector<TraceEntry>* trace = nullptr);

}  // namespace gravplan
