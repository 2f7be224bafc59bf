#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "gravplan/pddl/ast.hpp"

namespace oracle {

/// Fluent and atom values keyed by their printed ground form, e.g.
/// `(angle L2 z-axis)` and `(free-to-move L2)`.
struct NaiveState {
  std::map<std::string, double> fluents;
  std::set<std::string> atoms;
};

/// Brute-force reference semantics working on the parsed models directly:
/// bindings are re-enumerated and conditions re-evaluated on the AST at every
/// call, and process effects are evaluated with `#t` bound to the step.
class NaiveStepper {
 public:
  NaiveStepper(const gravplan::pddl::DomainModel& domain,
               const gravplan::pddl::ProblemModel& problem);

  NaiveState initial() const;
  void stabilize(NaiveState& s, std::vector<std::string>* fired = nullptr) const;
  /// Integrate one step of length delta, then stabilize.
  void step(NaiveState& s, double delta, std::vector<std::string>* fired = nullptr) const;
  std::vector<std::string> applicable_actions(const NaiveState& s) const;
  void apply(NaiveState& s, const std::string& action_label) const;
  bool goal_holds(const NaiveState& s) const;

 private:
  using Binding = std::map<std::string, std::string>;
  struct Instance {
    const gravplan::pddl::Schema* schema;
    Binding binding;
    std::vector<std::string> key;  // name, args
    std::string label;
  };

  std::vector<Instance> instantiate(const std::vector<gravplan::pddl::Schema>& schemas) const;
  bool is_a(const std::string& object, const std::string& type) const;
  std::string ground_atom(const gravplan::pddl::Atom& a, const Binding& b) const;
  double eval(const gravplan::pddl::Expr& e, const NaiveState& s, const Binding& b,
              double t) const;
  bool holds(const gravplan::pddl::Condition& c, const NaiveState& s, const Binding& b,
             double eps) const;
  void apply_effects(const Instance& inst, NaiveState& s) const;

  const gravplan::pddl::DomainModel& domain_;
  const gravplan::pddl::ProblemModel& problem_;
  std::map<std::string, std::string> object_type_;
  std::vector<Instance> actions_, processes_, events_;
};

}  // namespace oracle
