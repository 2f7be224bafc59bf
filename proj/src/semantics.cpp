#include "gravplan/semantics.hpp"

namespace gravplan {

using pddl::Comparator;

bool compare(Comparator op, double lhs, double rhs, double eps) {
  double d = lhs - rhs;
  switch (op) {
    case Comparator::Less: return d < -eps;
    case Comparator::LessEq: return d <= eps;
    case Comparator::Greater: return d > eps;
    case Comparator::GreaterEq: return d >= -eps;
    case Comparator::Equal: return d <= eps && d >= -eps;
  }
  return false;
}

namespace {

bool atoms_hold(const GroundCondition& c, const HybridState& s) {
  for (std::uint32_t a : c.positive)
    if (!s.atoms.test(a)) return false;
  for (std::uint32_t a : c.negative)
    if (s.atoms.test(a)) return false;
  return true;
}

bool comparisons_hold(const GroundCondition& c, const HybridState& s, double eps) {
  for (const auto& cmp : c.comparisons)
    if (!compare(cmp.op, cmp.lhs.eval(s.numeric), cmp.rhs.eval(s.numeric), eps)) return false;
  return true;
}

void apply_effect(const GroundEffect& eff, HybridState& s) {
  if (eff.numeric.size() == 1) {
    const auto& ne = eff.numeric[0];
    double v = ne.value.eval(s.numeric);
    double& f = s.numeric[ne.fluent];
    f = ne.op == pddl::NumericOp::Assign ? v : ne.op == pddl::NumericOp::Increase ? f + v : f - v;
  } else if (!eff.numeric.empty()) {
    // Values are read from the pre-state.
    double values[16];
    std::vector<double> spill;
    double* vals = values;
    if (eff.numeric.size() > 16) {
      spill.resize(eff.numeric.size());
      vals = spill.data();
    }
    for (std::size_t i = 0; i < eff.numeric.size(); ++i)
      vals[i] = eff.numeric[i].value.eval(s.numeric);
    for (std::size_t i = 0; i < eff.numeric.size(); ++i) {
      const auto& ne = eff.numeric[i];
      double& f = s.numeric[ne.fluent];
      f = ne.op == pddl::NumericOp::Assign     ? vals[i]
          : ne.op == pddl::NumericOp::Increase ? f + vals[i]
                                               : f - vals[i];
    }
  }
  for (std::uint32_t a : eff.del) s.atoms.set(a, false);
  for (std::uint32_t a : eff.add) s.atoms.set(a, true);
}

}  // namespace

bool holds(const GroundCondition& c, const HybridState& s, double eps) {
  return atoms_hold(c, s) && comparisons_hold(c, s, eps);
}

std::optional<std::string> first_violation(const GroundCondition& c, const HybridState& s,
                                           double eps) {
  for (std::size_t i = 0; i < c.positive.size(); ++i)
    if (!s.atoms.test(c.positive[i])) return c.positive_text[i];
  for (std::size_t i = 0; i < c.negative.size(); ++i)
    if (s.atoms.test(c.negative[i])) return c.negative_text[i];
  for (const auto& cmp : c.comparisons)
    if (!compare(cmp.op, cmp.lhs.eval(s.numeric), cmp.rhs.eval(s.numeric), eps)) return cmp.text;
  return std::nullopt;
}

bool applicable(const GroundedTask& task, const HybridState& s, std::uint32_t action) {
  return holds(task.actions.at(action).pre, s, kComparisonTolerance);
}

void apply_action_in_place(const GroundedTask& task, HybridState& s, std::uint32_t action) {
  const GroundSchema& a = task.actions.at(action);
  if (!holds(a.pre, s, kComparisonTolerance))
    throw SemanticsError("action " + a.label() + " is not applicable");
  apply_effect(a.eff, s);
}

HybridState apply_action(const GroundedTask& task, const HybridState& s, std::uint32_t action) {
  HybridState out = s;
  apply_action_in_place(task, out, action);
  return out;
}

void stabilize(const GroundedTask& task, HybridState& s, std::vector<std::uint32_t>* fired) {
  std::size_t count = 0;
  bool any = true;
  while (any) {
    any = false;
    for (std::uint32_t i = 0; i < task.events.size(); ++i) {
      const GroundSchema& e = task.events[i];
      if (!atoms_hold(e.pre, s) || !comparisons_hold(e.pre, s, 0.0)) continue;
      if (++count > kEventCascadeBound) throw SemanticsError("event cascade divergence");
      apply_effect(e.eff, s);
      if (fired) fired->push_back(i);
      any = true;
    }
  }
}

StepResult trigger_events(const GroundedTask& task, const HybridState& s) {
  StepResult r{s, {}};
  stabilize(task, r.state, &r.fired);
  return r;
}

std::vector<std::uint32_t> active_processes(const GroundedTask& task, const HybridState& s) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < task.processes.size(); ++i)
    if (holds(task.processes[i].pre, s, 0.0)) out.push_back(i);
  return out;
}

void integrate_in_place(const GroundedTask& task, HybridState& s, double delta,
                        std::vector<double>& scratch) {
  if (!(delta > 0)) throw SemanticsError("integration step must be positive");
  scratch.assign(s.numeric.size(), 0.0);
  // Active set and rates both come from the start-of-interval state.
  thread_local std::vector<std::uint32_t> active;
  active.clear();
  for (std::uint32_t i = 0; i < task.processes.size(); ++i) {
    const GroundSchema& p = task.processes[i];
    if (!atoms_hold(p.pre, s) || !comparisons_hold(p.pre, s, 0.0)) continue;
    active.push_back(i);
    for (const auto& ne : p.eff.numeric) {
      double step = ne.value.eval(s.numeric) * delta;
      scratch[ne.fluent] += ne.op == pddl::NumericOp::Decrease ? -step : step;
    }
  }
  for (std::size_t f = 0; f < scratch.size(); ++f)
    if (scratch[f] != 0.0) s.numeric[f] += scratch[f];
  for (std::uint32_t i : active)
    for (std::uint32_t a : task.processes[i].eff.del) s.atoms.set(a, false);
  for (std::uint32_t i : active)
    for (std::uint32_t a : task.processes[i].eff.add) s.atoms.set(a, true);
  s.time += delta;
}

HybridState integrate(const GroundedTask& task, const HybridState& s, double delta) {
  HybridState out = s;
  std::vector<double> scratch;
  integrate_in_place(task, out, delta, scratch);
  return out;
}

StepResult advance(const GroundedTask& task, const HybridState& s, double delta) {
  StepResult r{integrate(task, s, delta), {}};
  stabilize(task, r.state, &r.fired);
  return r;
}

bool goal_satisfied(const GroundedTask& task, const HybridState& s) {
  return holds(task.goal, s, kComparisonTolerance);
}

}  // namespace gravplan
