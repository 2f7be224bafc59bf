#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "gravplan/pddl/ast.hpp"
#include "gravplan/state.hpp"

namespace gravplan {

class GroundingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ground numeric expression compiled to postfix form over fluent indices.
class NumExpr {
 public:
  enum class Op : std::uint8_t { Const, Fluent, Add, Sub, Mul, Div, Neg };
  struct Instr {
    Op op;
    std::uint32_t index;
    double value;
  };

  static NumExpr constant(double v);
  static NumExpr fluent(std::uint32_t index);

  double eval(std::span<const double> values) const;
  const std::vector<Instr>& code() const { return code_; }
  std::vector<Instr>& code() { return code_; }
  /// Fluent indices read by this expression.
  std::vector<std::uint32_t> reads() const;
  /// Index when the expression is a bare fluent reference.
  bool is_fluent() const { return code_.size() == 1 && code_[0].op == Op::Fluent; }
  bool is_constant() const { return code_.size() == 1 && code_[0].op == Op::Const; }

 private:
  std::vector<Instr> code_;
};

struct GroundComparison {
  pddl::Comparator op;
  NumExpr lhs;
  NumExpr rhs;
  std::string text;
};

struct GroundCondition {
  std::vector<std::uint32_t> positive;
  std::vector<std::uint32_t> negative;
  std::vector<GroundComparison> comparisons;
  std::vector<std::string> positive_text;
  std::vector<std::string> negative_text;
};

struct GroundNumericEffect {
  pddl::NumericOp op;
  std::uint32_t fluent;
  /// For processes: the rate, i.e. the effect expression with `#t` factored out.
  NumExpr value;
};

struct GroundEffect {
  std::vector<std::uint32_t> add;
  std::vector<std::uint32_t> del;
  std::vector<GroundNumericEffect> numeric;
};

struct GroundSchema {
  std::string name;
  std::vector<std::string> args;
  GroundCondition pre;
  GroundEffect eff;

  /// `(name arg1 arg2 ...)`
  std::string label() const;
};

struct GroundedTask {
  std::string domain_name;
  std::string problem_name;
  std::vector<std::string> atom_names;    // `(connected L1 L2)`
  std::vector<std::string> fluent_names;  // `(angle L1 z-axis)`
  std::unordered_map<std::string, std::uint32_t> atom_index;
  std::unordered_map<std::string, std::uint32_t> fluent_index;
  /// Atoms no effect ever writes; their values are fixed by init.
  std::vector<bool> static_atom;
  std::vector<GroundSchema> actions;
  std::vector<GroundSchema> processes;
  /// Sorted by (name, args): the deterministic firing order.
  std::vector<GroundSchema> events;
  HybridState init;
  GroundCondition goal;
  /// Static-analysis findings (e.g. fluents read but never assigned).
  std::vector<std::string> diagnostics;

  std::optional<std::uint32_t> find_atom(const std::string& label) const;
  std::optional<std::uint32_t> find_fluent(const std::string& label) const;
  std::optional<std::uint32_t> find_action(const std::string& name,
                                           const std::vector<std::string>& args) const;
  /// Value of a 0-ary fluent such as `speed-i` in the initial state, if defined.
  std::optional<double> init_value(const std::string& fluent_label) const;
};

std::string ground_label(const std::string& name, const std::vector<std::string>& args);

/// Instantiates every schema over all type-correct object tuples, pruning
/// bindings whose static preconditions are false in init.
GroundedTask ground(const pddl::DomainModel& domain, const pddl::ProblemModel& problem);

}  // namespace gravplan
