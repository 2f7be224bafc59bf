#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gravplan/pddl/grounder.hpp"
#include "gravplan/state.hpp"

namespace gravplan {

/// Absolute tolerance for comparisons in action preconditions and goals.
inline constexpr double kComparisonTolerance = 1e-6;
/// Maximum event firings during one stabilization.
inline constexpr std::size_t kEventCascadeBound = 1000;

class SemanticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool compare(pddl::Comparator op, double lhs, double rhs, double eps);

/// Conjunction check; `eps` = 0 gives exact comparisons (processes, events).
bool holds(const GroundCondition& c, const HybridState& s, double eps);
/// Text of the first conjunct that fails, if any.
std::optional<std::string> first_violation(const GroundCondition& c, const HybridState& s,
                                           double eps);

bool applicable(const GroundedTask& task, const HybridState& s, std::uint32_t action);

/// Instantaneous effects only; events are not stabilized. Throws if inapplicable.
HybridState apply_action(const GroundedTask& task, const HybridState& s, std::uint32_t action);

/// Fires enabled events in (name, args) order until none is enabled.
/// Throws SemanticsError("event cascade divergence") past kEventCascadeBound firings.
void stabilize(const GroundedTask& task, HybridState& s,
               std::vector<std::uint32_t>* fired = nullptr);

struct StepResult {
  HybridState state;
  std::vector<std::uint32_t> fired;  // event indices, firing order
};

StepResult trigger_events(const GroundedTask& task, const HybridState& s);

std::vector<std::uint32_t> active_processes(const GroundedTask& task, const HybridState& s);

/// One explicit Euler step with rates frozen at the start of the interval.
/// Atom effects of active processes are re-asserted at the end of the step.
HybridState integrate(const GroundedTask& task, const HybridState& s, double delta);

/// integrate followed by stabilize: the only time-step primitive.
StepResult advance(const GroundedTask& task, const HybridState& s, double delta);

bool goal_satisfied(const GroundedTask& task, const HybridState& s);

/// In-place variants for the search loop.
void apply_action_in_place(const GroundedTask& task, HybridState& s, std::uint32_t action);
void integrate_in_place(const GroundedTask& task, HybridState& s, double delta,
                        std::vector<double>& scratch);

}  // namespace gravplan
