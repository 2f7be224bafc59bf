#pragma once

#include <string>
#include <variant>
#include <vector>

namespace gravplan::pddl {

struct SourceLocation {
  int line = 0;
  int column = 0;
};

/// Numeric expression tree. `#t` (Kind::Time) is only legal inside process effects.
struct Expr {
  enum class Kind { Number, Fluent, Add, Sub, Mul, Div, Time };

  Kind kind = Kind::Number;
  double value = 0.0;
  std::string name;               // Fluent
  std::vector<std::string> args;  // Fluent
  std::vector<Expr> children;     // Add/Sub/Mul/Div; Sub with one child is negation

  static Expr number(double v);
  static Expr fluent(std::string name, std::vector<std::string> args = {});
  static Expr time();
  static Expr binary(Kind k, Expr lhs, Expr rhs);

  bool mentions_time() const;
  bool operator==(const Expr&) const = default;
};

struct Atom {
  std::string predicate;
  std::vector<std::string> args;
  bool operator==(const Atom&) const = default;
};

enum class Comparator { Less, LessEq, Greater, GreaterEq, Equal };

std::string comparator_token(Comparator c);

struct Literal {
  Atom atom;
  bool positive = true;
  bool operator==(const Literal&) const = default;
};

struct Comparison {
  Comparator op = Comparator::Equal;
  Expr lhs;
  Expr rhs;
  bool operator==(const Comparison&) const = default;
};

using ConditionItem = std::variant<Literal, Comparison>;

/// Conjunction, in source order.
struct Condition {
  std::vector<ConditionItem> items;
  bool empty() const { return items.empty(); }
  bool operator==(const Condition&) const = default;
};

enum class NumericOp { Assign, Increase, Decrease };

std::string numeric_op_token(NumericOp op);

struct NumericEffect {
  NumericOp op = NumericOp::Assign;
  Atom fluent;  // function name + args
  Expr value;
  bool operator==(const NumericEffect&) const = default;
};

using EffectItem = std::variant<Literal, NumericEffect>;

struct TypedName {
  std::string name;
  std::string type = "object";
  bool operator==(const TypedName&) const = default;
};

struct Signature {
  std::string name;
  std::vector<TypedName> params;
  bool operator==(const Signature&) const = default;
};

enum class SchemaKind { Action, Process, Event };

std::string schema_keyword(SchemaKind k);

struct Schema {
  SchemaKind kind = SchemaKind::Action;
  std::string name;
  std::vector<TypedName> params;
  Condition precondition;
  std::vector<EffectItem> effect;
  bool operator==(const Schema&) const = default;
};

struct DomainModel {
  std::string name;
  /// Parsed from bare `(:action ...)`-style forms without a define wrapper.
  bool fragment = false;
  std::vector<std::string> requirements;
  std::vector<TypedName> types;  // name + parent
  std::vector<TypedName> constants;
  std::vector<Signature> predicates;
  std::vector<Signature> functions;
  std::vector<Schema> actions;
  std::vector<Schema> processes;
  std::vector<Schema> events;

  const Signature* find_predicate(const std::string& n) const;
  const Signature* find_function(const std::string& n) const;
  const Schema* find_schema(const std::string& n) const;
  bool operator==(const DomainModel&) const = default;
};

struct InitAssignment {
  Atom fluent;
  double value = 0.0;
  bool operator==(const InitAssignment&) const = default;
};

struct ProblemModel {
  std::string name;
  std::string domain_name;
  bool fragment = false;
  std::vector<TypedName> objects;
  std::vector<Atom> init_atoms;
  std::vector<InitAssignment> init_values;
  Condition goal;
  bool operator==(const ProblemModel&) const = default;
};

struct Diagnostic {
  SourceLocation location;
  std::string message;
};

}  // namespace gravplan::pddl
