#include "gravplan/pddl/grounder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "gravplan/pddl/printer.hpp"

namespace gravplan {

using namespace pddl;

NumExpr NumExpr::constant(double v) {
  NumExpr e;
  e.code_.push_back({Op::Const, 0, v});
  return e;
}

NumExpr NumExpr::fluent(std::uint32_t index) {
  NumExpr e;
  e.code_.push_back({Op::Fluent, index, 0.0});
  return e;
}

double NumExpr::eval(std::span<const double> values) const {
  if (code_.size() == 1) {
    const Instr& i = code_[0];
    return i.op == Op::Const ? i.value : values[i.index];
  }
  double stack[32];
  int top = 0;
  for (const Instr& i : code_) {
    switch (i.op) {
      case Op::Const: stack[top++] = i.value; break;
      case Op::Fluent: stack[top++] = values[i.index]; break;
      case Op::Neg: stack[top - 1] = -stack[top - 1]; break;
      default: {
        double b = stack[--top];
        double& a = stack[top - 1];
        if (i.op == Op::Add) a += b;
        else if (i.op == Op::Sub) a -= b;
        else if (i.op == Op::Mul) a *= b;
        else a /= b;
      }
    }
  }
  return stack[0];
}

std::vector<std::uint32_t> NumExpr::reads() const {
  std::vector<std::uint32_t> out;
  for (const Instr& i : code_)
    if (i.op == Op::Fluent) out.push_back(i.index);
  return out;
}

std::string ground_label(const std::string& name, const std::vector<std::string>& args) {
  std::string s = "(" + name;
  for (const auto& a : args) s += " " + a;
  return s + ")";
}

std::string GroundSchema::label() const { return ground_label(name, args); }

std::optional<std::uint32_t> GroundedTask::find_atom(const std::string& label) const {
  auto it = atom_index.find(label);
  if (it == atom_index.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> GroundedTask::find_fluent(const std::string& label) const {
  auto it = fluent_index.find(label);
  if (it == fluent_index.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> GroundedTask::find_action(
    const std::string& name, const std::vector<std::string>& args) const {
  for (std::uint32_t i = 0; i < actions.size(); ++i)
    if (actions[i].name == name && actions[i].args == args) return i;
  return std::nullopt;
}

std::optional<double> GroundedTask::init_value(const std::string& fluent_label) const {
  auto idx = find_fluent(fluent_label);
  if (!idx || std::isnan(init.numeric[*idx])) return std::nullopt;
  return init.numeric[*idx];
}

namespace {

constexpr int kMaxExprDepth = 30;

class Grounder {
 public:
  Grounder(const DomainModel& d, const ProblemModel& p) : d_(d), p_(p) {}

  GroundedTask run() {
    t_.domain_name = d_.name;
    t_.problem_name = p_.name;
    collect_types();
    collect_objects();
    collect_dynamic();
    enumerate_atoms_and_fluents();
    build_init();
    for (const auto& s : d_.actions) ground_schema(s, t_.actions);
    for (const auto& s : d_.processes) ground_schema(s, t_.processes);
    for (const auto& s : d_.events) ground_schema(s, t_.events);
    std::stable_sort(t_.events.begin(), t_.events.end(),
                     [](const GroundSchema& a, const GroundSchema& b) {
                       return std::tie(a.name, a.args) < std::tie(b.name, b.args);
                     });
    Binding none;
    t_.goal = compile_condition(p_.goal, none, "goal", nullptr);
    static_analysis();
    return std::move(t_);
  }

 private:
  using Binding = std::map<std::string, std::string>;

  void collect_types() {
    for (const auto& t : d_.types) parent_[t.name] = t.type;
  }

  bool is_subtype(std::string t, const std::string& of) const {
    for (int guard = 0; guard < 64; ++guard) {
      if (t == of || of == "object") return true;
      auto it = parent_.find(t);
      if (it == parent_.end()) return false;
      t = it->second;
    }
    return false;
  }

  void add_object(const TypedName& o) {
    if (!d_.types.empty() && o.type != "object" && !parent_.count(o.type))
      throw GroundingError("object '" + o.name + "' has undeclared type '" + o.type + "'");
    auto it = object_type_.find(o.name);
    if (it != object_type_.end()) {
      if (it->second != o.type)
        throw GroundingError("type mismatch: object '" + o.name + "' declared as both '" +
                             it->second + "' and '" + o.type + "'");
      return;
    }
    object_type_[o.name] = o.type;
    objects_.push_back(o);
  }

  void collect_objects() {
    for (const auto& c : d_.constants) add_object(c);
    for (const auto& o : p_.objects) add_object(o);
    if (p_.objects.empty() && p_.fragment) {
      // Fragment problems declare no objects; infer them from init and goal.
      std::set<std::string> seen;
      auto note = [&](const std::vector<std::string>& args) {
        for (const auto& a : args)
          if (!object_type_.count(a) && seen.insert(a).second) add_object({a, "object"});
      };
      for (const auto& a : p_.init_atoms) note(a.args);
      for (const auto& v : p_.init_values) note(v.fluent.args);
    }
  }

  std::vector<std::string> objects_of(const std::string& type) const {
    std::vector<std::string> out;
    for (const auto& o : objects_)
      if (is_subtype(o.type, type)) out.push_back(o.name);
    return out;
  }

  void collect_dynamic() {
    for (const auto* list : {&d_.actions, &d_.processes, &d_.events})
      for (const auto& s : *list)
        for (const auto& e : s.effect) {
          if (const auto* l = std::get_if<Literal>(&e))
            dynamic_predicates_.insert(l->atom.predicate);
          else
            written_functions_.insert(std::get<NumericEffect>(e).fluent.predicate);
        }
  }

  template <typename F>
  void for_each_tuple(const std::vector<TypedName>& params, F&& fn) const {
    std::vector<std::vector<std::string>> domains;
    for (const auto& p : params) {
      domains.push_back(objects_of(p.type));
      if (domains.back().empty()) return;
    }
    std::vector<std::size_t> idx(params.size(), 0);
    std::vector<std::string> tuple(params.size());
    while (true) {
      for (std::size_t i = 0; i < params.size(); ++i) tuple[i] = domains[i][idx[i]];
      fn(tuple);
      std::size_t k = params.size();
      while (k > 0) {
        --k;
        if (++idx[k] < domains[k].size()) break;
        idx[k] = 0;
        if (k == 0) return;
      }
      if (params.empty()) return;
    }
  }

  void enumerate_atoms_and_fluents() {
    for (const auto& sig : d_.predicates)
      for_each_tuple(sig.params, [&](const std::vector<std::string>& tuple) {
        std::string label = ground_label(sig.name, tuple);
        t_.atom_index.emplace(label, static_cast<std::uint32_t>(t_.atom_names.size()));
        t_.atom_names.push_back(label);
        t_.static_atom.push_back(!dynamic_predicates_.count(sig.name));
      });
    for (const auto& sig : d_.functions)
      for_each_tuple(sig.params, [&](const std::vector<std::string>& tuple) {
        std::string label = ground_label(sig.name, tuple);
        t_.fluent_index.emplace(label, static_cast<std::uint32_t>(t_.fluent_names.size()));
        t_.fluent_names.push_back(label);
      });
  }

  void build_init() {
    t_.init.time = 0.0;
    t_.init.numeric.assign(t_.fluent_names.size(), std::numeric_limits<double>::quiet_NaN());
    t_.init.atoms = AtomSet(t_.atom_names.size());
    for (const auto& a : p_.init_atoms) {
      auto idx = t_.find_atom(print_atom(a));
      if (!idx) throw GroundingError("init atom " + print_atom(a) + " does not resolve");
      t_.init.atoms.set(*idx);
    }
    for (const auto& v : p_.init_values) {
      auto idx = t_.find_fluent(print_atom(v.fluent));
      if (!idx) throw GroundingError("init fluent " + print_atom(v.fluent) + " does not resolve");
      t_.init.numeric[*idx] = v.value;
      assigned_.insert(*idx);
    }
  }

  static std::vector<std::string> substitute(const std::vector<std::string>& args,
                                             const Binding& b) {
    std::vector<std::string> out;
    out.reserve(args.size());
    for (const auto& a : args) {
      auto it = b.find(a);
      out.push_back(it == b.end() ? a : it->second);
    }
    return out;
  }

  std::uint32_t atom_id(const Atom& a, const Binding& b, const std::string& where) const {
    std::string label = ground_label(a.predicate, substitute(a.args, b));
    auto idx = t_.find_atom(label);
    if (!idx) throw GroundingError(where + ": atom " + label + " is not type-correct");
    return *idx;
  }

  std::uint32_t fluent_id(const std::string& name, const std::vector<std::string>& args,
                          const Binding& b, const std::string& where) const {
    std::string label = ground_label(name, substitute(args, b));
    auto idx = t_.find_fluent(label);
    if (!idx) throw GroundingError(where + ": fluent " + label + " is not type-correct");
    return *idx;
  }

  void compile_expr(const Expr& e, const Binding& b, const std::string& where, NumExpr& out,
                    int depth = 0) const {
    if (depth > kMaxExprDepth) throw GroundingError(where + ": expression too deep");
    auto& code = out.code();
    switch (e.kind) {
      case Expr::Kind::Number: code.push_back({NumExpr::Op::Const, 0, e.value}); return;
      case Expr::Kind::Fluent:
        code.push_back({NumExpr::Op::Fluent, fluent_id(e.name, e.args, b, where), 0.0});
        return;
      case Expr::Kind::Time: throw GroundingError(where + ": unexpected '#t'");
      default: break;
    }
    if (e.kind == Expr::Kind::Sub && e.children.size() == 1) {
      compile_expr(e.children[0], b, where, out, depth + 1);
      code.push_back({NumExpr::Op::Neg, 0, 0.0});
      return;
    }
    compile_expr(e.children[0], b, where, out, depth + 1);
    compile_expr(e.children[1], b, where, out, depth + 1);
    NumExpr::Op op = e.kind == Expr::Kind::Add   ? NumExpr::Op::Add
                     : e.kind == Expr::Kind::Sub ? NumExpr::Op::Sub
                     : e.kind == Expr::Kind::Mul ? NumExpr::Op::Mul
                                                 : NumExpr::Op::Div;
    code.push_back({op, 0, 0.0});
  }

  /// Returns the factor multiplying `#t` in a process effect value.
  static const Expr* rate_of(const Expr& e) {
    if (e.kind == Expr::Kind::Time) return nullptr;  // bare #t: rate 1
    if (e.kind == Expr::Kind::Mul && e.children.size() == 2) {
      if (e.children[0].kind == Expr::Kind::Time && !e.children[1].mentions_time())
        return &e.children[1];
      if (e.children[1].kind == Expr::Kind::Time && !e.children[0].mentions_time())
        return &e.children[0];
    }
    throw GroundingError("process effect must have the form (* #t <rate>)");
  }

  /// `pruned` is set when a static literal is false in init.
  GroundCondition compile_condition(const Condition& c, const Binding& b, const std::string& where,
                                    bool* pruned) const {
    GroundCondition g;
    for (const auto& item : c.items) {
      if (const auto* lit = std::get_if<Literal>(&item)) {
        std::uint32_t id = atom_id(lit->atom, b, where);
        if (t_.static_atom[id] && pruned) {
          if (t_.init.atoms.test(id) != lit->positive) {
            *pruned = true;
            return g;
          }
          continue;
        }
        std::string text = ground_label(lit->atom.predicate, substitute(lit->atom.args, b));
        if (lit->positive) {
          g.positive.push_back(id);
          g.positive_text.push_back(text);
        } else {
          g.negative.push_back(id);
          g.negative_text.push_back("(not " + text + ")");
        }
      } else {
        const auto& cmp = std::get<Comparison>(item);
        GroundComparison gc;
        gc.op = cmp.op;
        compile_expr(cmp.lhs, b, where, gc.lhs);
        compile_expr(cmp.rhs, b, where, gc.rhs);
        Comparison shown = cmp;
        substitute_expr(shown.lhs, b);
        substitute_expr(shown.rhs, b);
        gc.text = print_condition_item(shown);
        g.comparisons.push_back(std::move(gc));
      }
    }
    return g;
  }

  static void substitute_expr(Expr& e, const Binding& b) {
    if (e.kind == Expr::Kind::Fluent) e.args = substitute(e.args, b);
    for (auto& c : e.children) substitute_expr(c, b);
  }

  void ground_schema(const Schema& s, std::vector<GroundSchema>& out) {
    for_each_tuple(s.params, [&](const std::vector<std::string>& tuple) {
      Binding b;
      for (std::size_t i = 0; i < tuple.size(); ++i) b[s.params[i].name] = tuple[i];
      std::string where = ground_label(s.name, tuple);
      bool pruned = false;
      GroundSchema g;
      g.name = s.name;
      g.args = tuple;
      g.pre = compile_condition(s.precondition, b, where, &pruned);
      if (pruned) return;
      for (const auto& item : s.effect) {
        if (const auto* lit = std::get_if<Literal>(&item)) {
          (lit->positive ? g.eff.add : g.eff.del).push_back(atom_id(lit->atom, b, where));
        } else {
          const auto& ne = std::get<NumericEffect>(item);
          GroundNumericEffect ge;
          ge.op = ne.op;
          ge.fluent = fluent_id(ne.fluent.predicate, ne.fluent.args, b, where);
          if (s.kind == SchemaKind::Process && ne.value.mentions_time()) {
            const Expr* rate = rate_of(ne.value);
            if (rate)
              compile_expr(*rate, b, where, ge.value);
            else
              ge.value = NumExpr::constant(1.0);
          } else if (s.kind == SchemaKind::Process) {
            throw GroundingError(where + ": process numeric effects must be '#t'-scaled");
          } else {
            compile_expr(ne.value, b, where, ge.value);
          }
          written_.insert(ge.fluent);
          g.eff.numeric.push_back(std::move(ge));
        }
      }
      out.push_back(std::move(g));
    });
  }

  void static_analysis() {
    std::set<std::uint32_t> reported;
    auto check = [&](const NumExpr& e, const std::string& where) {
      for (std::uint32_t f : e.reads())
        if (!assigned_.count(f) && !written_.count(f) && reported.insert(f).second)
          t_.diagnostics.push_back(where + " reads " + t_.fluent_names[f] +
                                   ", which is neither assigned in init nor written by any effect");
    };
    auto check_schema = [&](const GroundSchema& g) {
      for (const auto& c : g.pre.comparisons) {
        check(c.lhs, g.label());
        check(c.rhs, g.label());
      }
      for (const auto& n : g.eff.numeric) check(n.value, g.label());
    };
    for (const auto* list : {&t_.actions, &t_.processes, &t_.events})
      for (const auto& g : *list) check_schema(g);
    for (const auto& c : t_.goal.comparisons) {
      check(c.lhs, "goal");
      check(c.rhs, "goal");
    }
  }

  const DomainModel& d_;
  const ProblemModel& p_;
  GroundedTask t_;
  std::map<std::string, std::string> parent_;
  std::map<std::string, std::string> object_type_;
  std::vector<TypedName> objects_;
  std::set<std::string> dynamic_predicates_;
  std::set<std::string> written_functions_;
  std::set<std::uint32_t> assigned_;
  std::set<std::uint32_t> written_;
};

}  // namespace

GroundedTask ground(const DomainModel& domain, const ProblemModel& problem) {
  return Grounder(domain, problem).run();
}

}  // namespace gravplan
