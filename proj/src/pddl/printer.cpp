#include "gravplan/pddl/printer.hpp"

#include <fmt/format.h>

#include <cmath>
#include <sstream>

namespace gravplan::pddl {

std::string format_number(double v) {
  if (v == 0) return "0";  // also folds -0
  std::string s = fmt::format("{}", v);
  if (s.find_first_of("eE") == std::string::npos) return s;
  // Shortest round-trip digits, expanded to positional notation.
  for (int prec = 1; prec <= 400; ++prec) {
    std::string f = fmt::format("{:.{}f}", v, prec);
    if (std::stod(f) == v) {
      while (f.back() == '0') f.pop_back();
      if (f.back() == '.') f.pop_back();
      return f;
    }
  }
  return fmt::format("{:f}", v);
}

std::string print_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Number: return format_number(e.value);
    case Expr::Kind::Time: return "#t";
    case Expr::Kind::Fluent: {
      std::string s = "(" + e.name;
      for (const auto& a : e.args) s += " " + a;
      return s + ")";
    }
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
    case Expr::Kind::Mul:
    case Expr::Kind::Div: {
      const char* op = e.kind == Expr::Kind::Add   ? "+"
                       : e.kind == Expr::Kind::Sub ? "-"
                       : e.kind == Expr::Kind::Mul ? "*"
                                                   : "/";
      std::string s = std::string("(") + op;
      for (const auto& c : e.children) s += " " + print_expr(c);
      return s + ")";
    }
  }
  return "?";
}

std::string print_atom(const Atom& a) {
  std::string s = "(" + a.predicate;
  for (const auto& x : a.args) s += " " + x;
  return s + ")";
}

namespace {

std::string print_literal(const Literal& l) {
  return l.positive ? print_atom(l.atom) : "(not " + print_atom(l.atom) + ")";
}

std::string print_effect_item(const EffectItem& item) {
  if (const auto* l = std::get_if<Literal>(&item)) return print_literal(*l);
  const auto& ne = std::get<NumericEffect>(item);
  return "(" + numeric_op_token(ne.op) + " " + print_atom(ne.fluent) + " " +
         print_expr(ne.value) + ")";
}

std::string print_typed(const std::vector<TypedName>& names) {
  std::string s;
  for (const auto& n : names) {
    if (!s.empty()) s += " ";
    s += n.name;
    if (n.type != "object") s += " - " + n.type;
  }
  return s;
}

// Groups consecutive names of the same type: `a b - t`.
std::string print_typed_grouped(const std::vector<TypedName>& names) {
  std::string s;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!s.empty()) s += " ";
    s += names[i].name;
    bool last_of_group = i + 1 == names.size() || names[i + 1].type != names[i].type;
    if (last_of_group && names[i].type != "object") s += " - " + names[i].type;
  }
  return s;
}

std::string print_signature(const Signature& sig) {
  std::string s = "(" + sig.name;
  if (!sig.params.empty()) s += " " + print_typed(sig.params);
  return s + ")";
}

std::string print_conjunction(const std::vector<std::string>& parts, const std::string& indent) {
  if (parts.size() == 1) return parts[0];
  std::string s = "(and";
  for (const auto& p : parts) s += "\n" + indent + p;
  return s + ")";
}

}  // namespace

std::string print_condition_item(const ConditionItem& item) {
  if (const auto* l = std::get_if<Literal>(&item)) return print_literal(*l);
  const auto& c = std::get<Comparison>(item);
  return "(" + comparator_token(c.op) + " " + print_expr(c.lhs) + " " + print_expr(c.rhs) + ")";
}

std::string print_condition(const Condition& c) {
  std::vector<std::string> parts;
  for (const auto& item : c.items) parts.push_back(print_condition_item(item));
  if (parts.empty()) return "(and)";
  return print_conjunction(parts, "      ");
}

std::string print_schema(const Schema& s) {
  std::ostringstream o;
  o << "(" << schema_keyword(s.kind) << " " << s.name << "\n";
  o << "    :parameters (" << print_typed(s.params) << ")\n";
  o << "    :precondition " << print_condition(s.precondition) << "\n";
  std::vector<std::string> parts;
  for (const auto& e : s.effect) parts.push_back(print_effect_item(e));
  o << "    :effect " << (parts.empty() ? std::string("(and)") : print_conjunction(parts, "      "))
    << ")";
  return o.str();
}

std::string print_domain(const DomainModel& d) {
  std::ostringstream o;
  std::string indent = d.fragment ? "" : "  ";
  auto schemas = [&](const std::vector<Schema>& list) {
    for (const auto& s : list) {
      std::string text = print_schema(s);
      if (!d.fragment) {
        std::string shifted;
        for (char c : text) {
          shifted += c;
          if (c == '\n') shifted += indent;
        }
        text = shifted;
      }
      o << indent << text << "\n";
      if (d.fragment) o << "\n";
    }
  };
  if (d.fragment) {
    schemas(d.actions);
    schemas(d.processes);
    schemas(d.events);
    return o.str();
  }
  o << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    o << "  (:requirements";
    for (const auto& r : d.requirements) o << " " << r;
    o << ")\n";
  }
  if (!d.types.empty()) o << "  (:types " << print_typed_grouped(d.types) << ")\n";
  if (!d.constants.empty()) o << "  (:constants " << print_typed_grouped(d.constants) << ")\n";
  if (!d.predicates.empty()) {
    o << "  (:predicates";
    for (const auto& p : d.predicates) o << "\n    " << print_signature(p);
    o << ")\n";
  }
  if (!d.functions.empty()) {
    o << "  (:functions";
    for (const auto& f : d.functions) o << "\n    " << print_signature(f);
    o << ")\n";
  }
  schemas(d.actions);
  schemas(d.processes);
  schemas(d.events);
  o << ")\n";
  return o.str();
}

std::string print_problem(const ProblemModel& p) {
  std::ostringstream o;
  std::string in = p.fragment ? "" : "  ";
  if (!p.fragment) {
    o << "(define (problem " << p.name << ")\n";
    if (!p.domain_name.empty()) o << "  (:domain " << p.domain_name << ")\n";
  }
  if (!p.objects.empty() || !p.fragment)
    o << in << "(:objects " << print_typed_grouped(p.objects) << ")\n";
  o << in << "(:init";
  for (const auto& a : p.init_atoms) o << "\n" << in << "  " << print_atom(a);
  for (const auto& v : p.init_values)
    o << "\n" << in << "  (= " << print_atom(v.fluent) << " " << format_number(v.value) << ")";
  o << ")\n";
  std::vector<std::string> parts;
  for (const auto& item : p.goal.items) parts.push_back(print_condition_item(item));
  o << in << "(:goal " << (parts.empty() ? std::string("(and)") : print_conjunction(parts, in + "  "))
    << ")\n";
  if (!p.fragment) o << ")\n";
  return o.str();
}

}  // namespace gravplan::pddl
