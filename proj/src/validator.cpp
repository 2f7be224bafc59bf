#include "gravplan/validator.hpp"

#include <cmath>
#include <sstream>

#include "gravplan/semantics.hpp"

namespace gravplan {

namespace {

long grid_step(double t, double delta) {
  double k = std::round(t / delta);
  if (std::fabs(t - k * delta) > 1e-6 * std::max(1.0, std::fabs(t)))
    throw ValidationError("timestamp " + format_time(t) + " is not a multiple of delta " +
                          format_time(delta));
  return static_cast<long>(k);
}

void record_events(const GroundedTask& task, const std::vector<std::uint32_t>& fired, double t,
                   std::vector<TraceEntry>& trace) {
  for (std::uint32_t e : fired)
    trace.push_back({t, task.events[e].name, task.events[e].args, true});
}

}  // namespace

ValidationReport validate_plan(const GroundedTask& task, const Plan& plan, double delta) {
  if (!(delta > 0)) throw ValidationError("delta must be positive");
  ValidationReport r;
  r.makespan = plan.makespan();
  HybridState s = task.init;
  std::vector<std::uint32_t> fired;
  stabilize(task, s, &fired);
  record_events(task, fired, 0.0, r.trace);

  long step = 0;
  auto advance_to = [&](long target) {
    while (step < target) {
      StepResult next = advance(task, s, delta);
      s = std::move(next.state);
      ++step;
      record_events(task, next.fired, static_cast<double>(step) * delta, r.trace);
    }
  };

  double previous = 0.0;
  for (const TimedAction& a : plan.actions) {
    if (a.time < previous) throw ValidationError("timestamps must be nondecreasing");
    previous = a.time;
    advance_to(grid_step(a.time, delta));
    double now = static_cast<double>(step) * delta;
    auto id = task.find_action(a.name, a.args);
    if (!id) {
      r.failure = ValidationFailure{now, a.label(), "unknown action"};
      r.final_state = s;
      return r;
    }
    if (auto why = first_violation(task.actions[*id].pre, s, kComparisonTolerance)) {
      r.failure = ValidationFailure{now, a.label(), *why};
      r.final_state = s;
      return r;
    }
    apply_action_in_place(task, s, *id);
    r.trace.push_back({now, a.name, a.args, false});
    fired.clear();
    stabilize(task, s, &fired);
    record_events(task, fired, now, r.trace);
  }
  advance_to(grid_step(r.makespan, delta));
  r.final_state = s;
  r.goal_satisfied = goal_satisfied(task, s);
  r.valid = r.goal_satisfied;
  if (!r.goal_satisfied) {
    auto why = first_violation(task.goal, s, kComparisonTolerance);
    r.failure = ValidationFailure{static_cast<double>(step) * delta, "goal", why.value_or("")};
  }
  return r;
}

std::string format_report(const ValidationReport& report) {
  std::ostringstream o;
  o << "verdict: " << (report.valid ? "valid" : "invalid") << "\n";
  o << "makespan: " << format_time(report.makespan) << "\n";
  o << "goal satisfied: " << (report.goal_satisfied ? "yes" : "no") << "\n";
  if (report.failure)
    o << "failure at " << format_time(report.failure->time) << ": " << report.failure->action
      << " violates " << report.failure->violated << "\n";
  o << "trace:\n";
  for (const auto& e : report.trace)
    o << (e.is_event ? ";" : "") << format_time(e.time) << ": " << e.label() << "\n";
  return o.str();
}

nlohmann::json state_to_json(const GroundedTask& task, const HybridState& s) {
  nlohmann::json fluents = nlohmann::json::object();
  for (std::size_t i = 0; i < s.numeric.size(); ++i)
    if (!std::isnan(s.numeric[i])) fluents[task.fluent_names[i]] = s.numeric[i];
  nlohmann::json atoms = nlohmann::json::array();
  for (std::size_t i = 0; i < s.atoms.size(); ++i)
    if (s.atoms.test(i) && !task.static_atom[i]) atoms.push_back(task.atom_names[i]);
  return {{"time", s.time}, {"fluents", fluents}, {"atoms", atoms}};
}

nlohmann::json report_to_json(const GroundedTask& task, const ValidationReport& report) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& e : report.trace)
    trace.push_back({{"time", e.time}, {"happening", e.label()}, {"event", e.is_event}});
  nlohmann::json j = {{"verdict", report.valid ? "valid" : "invalid"},
                      {"makespan", report.makespan},
                      {"goal_satisfied", report.goal_satisfied},
                      {"trace", trace},
                      {"final_state", state_to_json(task, report.final_state)}};
  if (report.failure)
    j["failure"] = {{"time", report.failure->time},
                    {"action", report.failure->action},
                    {"violated", report.failure->violated}};
  else
    j["failure"] = nullptr;
  return j;
}

}  // namespace gravplan
