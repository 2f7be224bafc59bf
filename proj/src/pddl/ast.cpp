#include "gravplan/pddl/ast.hpp"

#include <algorithm>

namespace gravplan::pddl {

Expr Expr::number(double v) {
  Expr e;
  e.kind = Kind::Number;
  e.value = v;
  return e;
}

Expr Expr::fluent(std::string name, std::vector<std::string> args) {
  Expr e;
  e.kind = Kind::Fluent;
  e.name = std::move(name);
  e.args = std::move(args);
  return e;
}

Expr Expr::time() {
  Expr e;
  e.kind = Kind::Time;
  return e;
}

Expr Expr::binary(Kind k, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = k;
  e.children.push_back(std::move(lhs));
  e.children.push_back(std::move(rhs));
  return e;
}

bool Expr::mentions_time() const {
  if (kind == Kind::Time) return true;
  return std::any_of(children.begin(), children.end(),
                     [](const Expr& c) { return c.mentions_time(); });
}

std::string comparator_token(Comparator c) {
  switch (c) {
    case Comparator::Less: return "<";
    case Comparator::LessEq: return "<=";
    case Comparator::Greater: return ">";
    case Comparator::GreaterEq: return ">=";
    case Comparator::Equal: return "=";
  }
  return "?";
}

std::string numeric_op_token(NumericOp op) {
  switch (op) {
    case NumericOp::Assign: return "assign";
    case NumericOp::Increase: return "increase";
    case NumericOp::Decrease: return "decrease";
  }
  return "?";
}

std::string schema_keyword(SchemaKind k) {
  switch (k) {
    case SchemaKind::Action: return ":action";
    case SchemaKind::Process: return ":process";
    case SchemaKind::Event: return ":event";
  }
  return "?";
}

namespace {

template <typename T>
const T* find_named(const std::vector<T>& v, const std::string& n) {
  for (const auto& x : v)
    if (x.name == n) return &x;
  return nullptr;
}

}  // namespace

const Signature* DomainModel::find_predicate(const std::string& n) const {
  return find_named(predicates, n);
}

const Signature* DomainModel::find_function(const std::string& n) const {
  return find_named(functions, n);
}

const Schema* DomainModel::find_schema(const std::string& n) const {
  for (const auto* list : {&actions, &processes, &events})
    if (const Schema* s = find_named(*list, n)) return s;
  return nullptr;
}

}  // namespace gravplan::pddl
