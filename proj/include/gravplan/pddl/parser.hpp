#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gravplan/pddl/ast.hpp"

namespace gravplan::pddl {

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLocation loc, const std::string& message);
  SourceLocation location() const { return loc_; }
  const std::string& message() const { return message_; }

 private:
  SourceLocation loc_;
  std::string message_;
};

/// One node of the raw s-expression tree.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  SourceLocation location;
};

/// Reads every top-level form; `;` starts a comment running to end of line.
std::vector<SExpr> read_sexprs(std::string_view text);

/// Parses a full `(define (domain ...))` or a bare sequence of
/// `(:action|:process|:event ...)` forms. Non-fatal notes (e.g. the `zaxis`
/// spelling being normalized) are appended to `notes` when given.
DomainModel parse_domain(std::string_view text, std::vector<Diagnostic>* notes = nullptr);

/// Parses a full `(define (problem ...))` or bare `(:objects|:init|:goal ...)`
/// forms. Constants of `domain`, when given, count as declared objects.
ProblemModel parse_problem(std::string_view text, const DomainModel* domain = nullptr,
                           std::vector<Diagnostic>* notes = nullptr);

}  // namespace gravplan::pddl
