#pragma once

#include <string>

#include "gravplan/pddl/ast.hpp"

namespace gravplan::pddl {

/// Shortest decimal that reads back to the same double, never in exponent form.
std::string format_number(double v);

std::string print_expr(const Expr& e);
std::string print_atom(const Atom& a);
std::string print_condition(const Condition& c);
std::string print_condition_item(const ConditionItem& item);
std::string print_schema(const Schema& s);

/// Canonical s-expression text; parse_domain(print_domain(d)) == d.
std::string print_domain(const DomainModel& d);
std::string print_problem(const ProblemModel& p);

}  // namespace gravplan::pddl
