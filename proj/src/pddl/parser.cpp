#include "gravplan/pddl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <set>

namespace gravplan::pddl {

ParseError::ParseError(SourceLocation loc, const std::string& message)
    : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " +
                         message),
      loc_(loc),
      message_(message) {}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void fail(SourceLocation loc, const std::string& msg) { throw ParseError(loc, msg); }

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text) {
  std::vector<SExpr> top;
  std::vector<SExpr> stack;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push_item = [&](SExpr e) {
    if (stack.empty())
      top.push_back(std::move(e));
    else
      stack.back().items.push_back(std::move(e));
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
      continue;
    }
    if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    SourceLocation here{line, col};
    if (c == '(') {
      SExpr e;
      e.is_list = true;
      e.location = here;
      stack.push_back(std::move(e));
      ++i;
      ++col;
      continue;
    }
    if (c == ')') {
      if (stack.empty()) fail(here, "unbalanced parentheses: unexpected ')'");
      SExpr done = std::move(stack.back());
      stack.pop_back();
      push_item(std::move(done));
      ++i;
      ++col;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
           text[i] != '(' && text[i] != ')' && text[i] != ';')
      ++i;
    SExpr a;
    a.atom = std::string(text.substr(start, i - start));
    a.location = here;
    col += static_cast<int>(i - start);
    push_item(std::move(a));
  }
  if (!stack.empty())
    fail(stack.back().location, "unbalanced parentheses: '(' is never closed");
  return top;
}

namespace {

std::optional<double> to_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (*b == '+') ++b;
  double v = 0;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) return std::nullopt;
  return v;
}

bool is_variable(const std::string& s) { return !s.empty() && s[0] == '?'; }

/// Shared state of one parse: normalization notes and declared names.
class Parser {
 public:
  explicit Parser(std::vector<Diagnostic>* notes) : notes_(notes) {}

  std::string identifier(const SExpr& e) {
    if (e.is_list) fail(e.location, "expected a name, found a list");
    if (lower(e.atom) == "zaxis") {
      if (notes_)
        notes_->push_back({e.location, "normalized spelling 'zaxis' to 'z-axis'"});
      return "z-axis";
    }
    return e.atom;
  }

  static std::string keyword(const SExpr& e) { return e.is_list ? std::string() : lower(e.atom); }

  static std::string head(const SExpr& e) {
    if (!e.is_list || e.items.empty() || e.items[0].is_list) return {};
    return lower(e.items[0].atom);
  }

  std::vector<TypedName> typed_list(const std::vector<SExpr>& items, std::size_t from) {
    std::vector<TypedName> out;
    std::size_t pending = 0;
    for (std::size_t i = from; i < items.size(); ++i) {
      const SExpr& it = items[i];
      if (it.is_list) fail(it.location, "unexpected list in typed name list");
      std::string type;
      if (it.atom == "-") {
        if (i + 1 >= items.size()) fail(it.location, "missing type after '-'");
        type = identifier(items[++i]);
      } else if (it.atom.size() > 1 && it.atom[0] == '-' && !to_number(it.atom)) {
        type = it.atom.substr(1);  // `?l1 -link`
      }
      if (!type.empty()) {
        if (pending == 0) fail(it.location, "type annotation without names");
        for (std::size_t k = out.size() - pending; k < out.size(); ++k) out[k].type = type;
        pending = 0;
        continue;
      }
      out.push_back({identifier(it), "object"});
      ++pending;
    }
    return out;
  }

  Atom atom_of(const SExpr& e) {
    if (!e.is_list || e.items.empty()) fail(e.location, "expected an atom");
    Atom a;
    a.predicate = identifier(e.items[0]);
    for (std::size_t i = 1; i < e.items.size(); ++i) a.args.push_back(identifier(e.items[i]));
    return a;
  }

  Expr expr(const SExpr& e) {
    if (!e.is_list) {
      if (e.atom == "#t") return Expr::time();
      if (auto v = to_number(e.atom)) return Expr::number(*v);
      fail(e.location, "expected a number, '#t' or a fluent, found '" + e.atom + "'");
    }
    if (e.items.empty()) fail(e.location, "empty expression");
    std::string h = head(e);
    auto arith = [&](Expr::Kind k) {
      if (k == Expr::Kind::Sub && e.items.size() == 2) {
        Expr n;
        n.kind = k;
        n.children.push_back(expr(e.items[1]));
        return n;
      }
      if (e.items.size() != 3) fail(e.location, "operator '" + h + "' takes two operands");
      return Expr::binary(k, expr(e.items[1]), expr(e.items[2]));
    };
    if (h == "+") return arith(Expr::Kind::Add);
    if (h == "-") return arith(Expr::Kind::Sub);
    if (h == "*") return arith(Expr::Kind::Mul);
    if (h == "/") return arith(Expr::Kind::Div);
    Atom f = atom_of(e);
    return Expr::fluent(std::move(f.predicate), std::move(f.args));
  }

  void condition_into(const SExpr& e, Condition& out) {
    if (!e.is_list) fail(e.location, "expected a condition, found '" + e.atom + "'");
    if (e.items.empty()) return;  // ()
    std::string h = head(e);
    if (h == "and") {
      for (std::size_t i = 1; i < e.items.size(); ++i) condition_into(e.items[i], out);
      return;
    }
    if (h == "not") {
      if (e.items.size() != 2) fail(e.location, "'not' takes one atom");
      const SExpr& inner = e.items[1];
      std::string ih = head(inner);
      if (ih == "and" || ih == "or" || ih == "not" || is_comparator(ih))
        fail(inner.location, "only atoms may be negated");
      out.items.emplace_back(Literal{atom_of(inner), false});
      return;
    }
    if (h == "or" || h == "imply" || h == "forall" || h == "exists" || h == "when")
      fail(e.location, "unsupported construct '" + h + "': conditions must be conjunctive");
    if (is_comparator(h)) {
      if (e.items.size() != 3) fail(e.location, "comparison takes two operands");
      Comparison c{comparator_of(h), expr(e.items[1]), expr(e.items[2])};
      out.items.emplace_back(std::move(c));
      return;
    }
    out.items.emplace_back(Literal{atom_of(e), true});
  }

  Condition condition(const SExpr& e) {
    Condition c;
    condition_into(e, c);
    return c;
  }

  void effect_into(const SExpr& e, std::vector<EffectItem>& out) {
    if (!e.is_list) fail(e.location, "expected an effect, found '" + e.atom + "'");
    if (e.items.empty()) return;
    std::string h = head(e);
    if (h == "and") {
      for (std::size_t i = 1; i < e.items.size(); ++i) effect_into(e.items[i], out);
      return;
    }
    if (h == "not") {
      if (e.items.size() != 2) fail(e.location, "'not' takes one atom");
      out.emplace_back(Literal{atom_of(e.items[1]), false});
      return;
    }
    if (h == "assign" || h == "increase" || h == "decrease") {
      if (e.items.size() != 3) fail(e.location, "'" + h + "' takes a fluent and a value");
      NumericOp op = h == "assign" ? NumericOp::Assign
                     : h == "increase" ? NumericOp::Increase
                                       : NumericOp::Decrease;
      out.emplace_back(NumericEffect{op, atom_of(e.items[1]), expr(e.items[2])});
      return;
    }
    if (h == "when" || h == "forall" || h == "scale-up" || h == "scale-down")
      fail(e.location, "unsupported effect construct '" + h + "'");
    out.emplace_back(Literal{atom_of(e), true});
  }

  Schema schema(const SExpr& e, SchemaKind kind) {
    if (e.items.size() < 2) fail(e.location, "schema without a name");
    Schema s;
    s.kind = kind;
    s.name = identifier(e.items[1]);
    for (std::size_t i = 2; i < e.items.size(); ++i) {
      std::string k = keyword(e.items[i]);
      if (i + 1 >= e.items.size()) fail(e.items[i].location, "missing value for '" + k + "'");
      const SExpr& v = e.items[++i];
      if (k == ":parameters") {
        if (!v.is_list) fail(v.location, ":parameters expects a list");
        s.params = typed_list(v.items, 0);
      } else if (k == ":precondition") {
        s.precondition = condition(v);
      } else if (k == ":effect") {
        effect_into(v, s.effect);
      } else {
        fail(e.items[i - 1].location, "unknown schema section '" + e.items[i - 1].atom + "'");
      }
    }
    schema_locations_[s.name] = e.location;
    return s;
  }

  SourceLocation schema_location(const std::string& n) const {
    auto it = schema_locations_.find(n);
    return it == schema_locations_.end() ? SourceLocation{} : it->second;
  }

  static bool is_comparator(const std::string& h) {
    return h == "<" || h == "<=" || h == ">" || h == ">=" || h == "=";
  }

  static Comparator comparator_of(const std::string& h) {
    if (h == "<") return Comparator::Less;
    if (h == "<=") return Comparator::LessEq;
    if (h == ">") return Comparator::Greater;
    if (h == ">=") return Comparator::GreaterEq;
    return Comparator::Equal;
  }

 private:
  std::vector<Diagnostic>* notes_;
  std::map<std::string, SourceLocation> schema_locations_;
};

// ---- well-formedness checks ------------------------------------------------

void collect_fluents(const Expr& e, std::vector<const Expr*>& out) {
  if (e.kind == Expr::Kind::Fluent) out.push_back(&e);
  for (const auto& c : e.children) collect_fluents(c, out);
}

struct SchemaChecker {
  const DomainModel& d;
  const Schema& s;
  SourceLocation loc;
  bool strict;

  void check_terms(const std::vector<std::string>& args, const std::string& what) const {
    std::set<std::string> params;
    for (const auto& p : s.params) params.insert(p.name);
    for (const auto& a : args) {
      if (is_variable(a)) {
        if (!params.count(a))
          fail(loc, "schema '" + s.name + "': variable " + a + " in " + what +
                        " is not a parameter");
      } else if (strict) {
        bool known = std::any_of(d.constants.begin(), d.constants.end(),
                                 [&](const TypedName& c) { return c.name == a; });
        if (!known)
          fail(loc, "schema '" + s.name + "': undeclared constant '" + a + "' in " + what);
      }
    }
  }

  void check_atom(const Atom& a) const {
    if (strict) {
      const Signature* sig = d.find_predicate(a.predicate);
      if (!sig) fail(loc, "schema '" + s.name + "': undeclared predicate '" + a.predicate + "'");
      if (sig->params.size() != a.args.size())
        fail(loc, "schema '" + s.name + "': predicate '" + a.predicate + "' expects " +
                      std::to_string(sig->params.size()) + " arguments");
    }
    check_terms(a.args, "(" + a.predicate + ")");
  }

  void check_fluent(const std::string& name, const std::vector<std::string>& args) const {
    if (strict) {
      const Signature* sig = d.find_function(name);
      if (!sig) fail(loc, "schema '" + s.name + "': undeclared fluent '" + name + "'");
      if (sig->params.size() != args.size())
        fail(loc, "schema '" + s.name + "': fluent '" + name + "' expects " +
                      std::to_string(sig->params.size()) + " arguments");
    }
    check_terms(args, "(" + name + ")");
  }

  void check_expr(const Expr& e, bool time_ok) const {
    if (e.mentions_time() && !time_ok)
      fail(loc, "schema '" + s.name + "': '#t' may only appear in process effects");
    std::vector<const Expr*> fl;
    collect_fluents(e, fl);
    for (const Expr* f : fl) check_fluent(f->name, f->args);
  }

  void run() const {
    for (const auto& item : s.precondition.items) {
      if (const auto* lit = std::get_if<Literal>(&item)) {
        check_atom(lit->atom);
      } else {
        const auto& c = std::get<Comparison>(item);
        check_expr(c.lhs, false);
        check_expr(c.rhs, false);
      }
    }
    std::set<std::pair<std::string, std::vector<std::string>>> written;
    bool has_rate = false;
    for (const auto& item : s.effect) {
      std::pair<std::string, std::vector<std::string>> key;
      if (const auto* lit = std::get_if<Literal>(&item)) {
        check_atom(lit->atom);
        key = {"atom:" + lit->atom.predicate, lit->atom.args};
      } else {
        const auto& ne = std::get<NumericEffect>(item);
        check_fluent(ne.fluent.predicate, ne.fluent.args);
        bool timed = ne.value.mentions_time();
        if (timed && ne.op == NumericOp::Assign)
          fail(loc, "schema '" + s.name + "': '#t' cannot be used in assign");
        check_expr(ne.value, s.kind == SchemaKind::Process);
        has_rate = has_rate || timed;
        key = {"fluent:" + ne.fluent.predicate, ne.fluent.args};
      }
      if (!written.insert(key).second)
        fail(loc, "schema '" + s.name + "': two effects write the same fluent");
    }
    if (s.kind == SchemaKind::Process && !has_rate)
      fail(loc, "process '" + s.name + "' has no '#t'-scaled numeric effect");
  }
};

void infer_signatures(DomainModel& d) {
  std::map<std::string, Signature> preds, funcs;
  auto note = [](std::map<std::string, Signature>& into, const Schema& s, const std::string& name,
                 const std::vector<std::string>& args) {
    if (into.count(name)) return;
    Signature sig{name, {}};
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string type = "object";
      for (const auto& p : s.params)
        if (p.name == args[i]) type = p.type;
      sig.params.push_back({"?a" + std::to_string(i + 1), type});
    }
    into.emplace(name, std::move(sig));
  };
  for (const auto* list : {&d.actions, &d.processes, &d.events}) {
    for (const Schema& s : *list) {
      auto visit_expr = [&](const Expr& e) {
        std::vector<const Expr*> fl;
        collect_fluents(e, fl);
        for (const Expr* f : fl) note(funcs, s, f->name, f->args);
      };
      for (const auto& item : s.precondition.items) {
        if (const auto* lit = std::get_if<Literal>(&item)) {
          note(preds, s, lit->atom.predicate, lit->atom.args);
        } else {
          visit_expr(std::get<Comparison>(item).lhs);
          visit_expr(std::get<Comparison>(item).rhs);
        }
      }
      for (const auto& item : s.effect) {
        if (const auto* lit = std::get_if<Literal>(&item)) {
          note(preds, s, lit->atom.predicate, lit->atom.args);
        } else {
          const auto& ne = std::get<NumericEffect>(item);
          note(funcs, s, ne.fluent.predicate, ne.fluent.args);
          visit_expr(ne.value);
        }
      }
    }
  }
  for (auto& [_, sig] : preds) d.predicates.push_back(std::move(sig));
  for (auto& [_, sig] : funcs) d.functions.push_back(std::move(sig));
}

void add_schema(Parser& p, DomainModel& d, const SExpr& e, const std::string& h) {
  SchemaKind kind = h == ":action" ? SchemaKind::Action
                    : h == ":process" ? SchemaKind::Process
                                      : SchemaKind::Event;
  Schema s = p.schema(e, kind);
  if (d.find_schema(s.name)) fail(e.location, "duplicate schema '" + s.name + "'");
  (kind == SchemaKind::Action ? d.actions : kind == SchemaKind::Process ? d.processes : d.events)
      .push_back(std::move(s));
}

}  // namespace

DomainModel parse_domain(std::string_view text, std::vector<Diagnostic>* notes) {
  std::vector<SExpr> top = read_sexprs(text);
  if (top.empty()) fail({1, 1}, "no domain definition");
  Parser p(notes);
  DomainModel d;

  if (Parser::head(top[0]) == "define") {
    if (top.size() > 1) fail(top[1].location, "unexpected content after domain definition");
    const SExpr& def = top[0];
    if (def.items.size() < 2 || Parser::head(def.items[1]) != "domain" ||
        def.items[1].items.size() != 2)
      fail(def.location, "expected (domain <name>)");
    d.name = p.identifier(def.items[1].items[1]);
    for (std::size_t i = 2; i < def.items.size(); ++i) {
      const SExpr& sec = def.items[i];
      std::string h = Parser::head(sec);
      if (h == ":requirements") {
        for (std::size_t k = 1; k < sec.items.size(); ++k)
          d.requirements.push_back(lower(sec.items[k].atom));
      } else if (h == ":types") {
        d.types = p.typed_list(sec.items, 1);
      } else if (h == ":constants") {
        d.constants = p.typed_list(sec.items, 1);
      } else if (h == ":predicates" || h == ":functions") {
        for (std::size_t k = 1; k < sec.items.size(); ++k) {
          const SExpr& item = sec.items[k];
          if (!item.is_list) {
            // `- number` return-type annotations on functions
            if (h == ":functions" && item.atom == "-" && k + 1 < sec.items.size()) {
              ++k;
              continue;
            }
            fail(item.location, "expected a signature");
          }
          if (item.items.empty()) fail(item.location, "empty signature");
          Signature sig{p.identifier(item.items[0]), p.typed_list(item.items, 1)};
          auto& into = h == ":predicates" ? d.predicates : d.functions;
          if (std::any_of(into.begin(), into.end(),
                          [&](const Signature& s) { return s.name == sig.name; }))
            fail(item.location, "duplicate declaration of '" + sig.name + "'");
          into.push_back(std::move(sig));
        }
      } else if (h == ":action" || h == ":process" || h == ":event") {
        add_schema(p, d, sec, h);
      } else {
        fail(sec.location, "unknown domain section '" + (sec.is_list && !sec.items.empty()
                                                              ? sec.items[0].atom
                                                              : sec.atom) +
                               "'");
      }
    }
  } else {
    d.fragment = true;
    for (const SExpr& sec : top) {
      std::string h = Parser::head(sec);
      if (h == ":action" || h == ":process" || h == ":event") {
        add_schema(p, d, sec, h);
      } else if (h == ":init" || h == ":goal" || h == ":objects") {
        fail(sec.location, "no domain definition (found problem section '" + h + "')");
      } else {
        fail(sec.location, "unknown keyword section '" +
                               (sec.is_list && !sec.items.empty() ? sec.items[0].atom : sec.atom) +
                               "'");
      }
    }
    infer_signatures(d);
  }

  for (const auto* list : {&d.actions, &d.processes, &d.events})
    for (const Schema& s : *list) SchemaChecker{d, s, p.schema_location(s.name), !d.fragment}.run();
  return d;
}

ProblemModel parse_problem(std::string_view text, const DomainModel* domain,
                           std::vector<Diagnostic>* notes) {
  std::vector<SExpr> top = read_sexprs(text);
  if (top.empty()) fail({1, 1}, "no problem definition");
  Parser p(notes);
  ProblemModel pm;
  std::vector<const SExpr*> sections;
  bool objects_declared = false;

  if (Parser::head(top[0]) == "define") {
    if (top.size() > 1) fail(top[1].location, "unexpected content after problem definition");
    const SExpr& def = top[0];
    if (def.items.size() < 2 || Parser::head(def.items[1]) != "problem" ||
        def.items[1].items.size() != 2)
      fail(def.location, "expected (problem <name>)");
    pm.name = p.identifier(def.items[1].items[1]);
    for (std::size_t i = 2; i < def.items.size(); ++i) sections.push_back(&def.items[i]);
  } else {
    pm.fragment = true;
    for (const auto& s : top) sections.push_back(&s);
  }

  std::map<std::pair<std::string, std::vector<std::string>>, SourceLocation> assigned;
  bool have_goal = false;
  SourceLocation goal_loc = top[0].location;
  std::vector<std::pair<SourceLocation, std::vector<std::string>>> references;
  for (const SExpr* sec : sections) {
    std::string h = Parser::head(*sec);
    if (h == ":domain") {
      if (sec->items.size() != 2) fail(sec->location, "expected (:domain <name>)");
      pm.domain_name = p.identifier(sec->items[1]);
    } else if (h == ":objects") {
      pm.objects = p.typed_list(sec->items, 1);
      objects_declared = true;
    } else if (h == ":init") {
      for (std::size_t k = 1; k < sec->items.size(); ++k) {
        const SExpr& it = sec->items[k];
        if (Parser::head(it) == "=") {
          if (it.items.size() != 3 || it.items[2].is_list)
            fail(it.location, "init assignment must be (= (<fluent> ...) <number>)");
          Atom f = p.atom_of(it.items[1]);
          auto v = to_number(it.items[2].atom);
          if (!v) fail(it.items[2].location, "init value must be numeric");
          auto key = std::make_pair(f.predicate, f.args);
          if (assigned.count(key)) fail(it.location, "duplicate init assignment");
          assigned.emplace(key, it.location);
          references.emplace_back(it.location, f.args);
          pm.init_values.push_back({std::move(f), *v});
        } else {
          Atom a = p.atom_of(it);
          references.emplace_back(it.location, a.args);
          pm.init_atoms.push_back(std::move(a));
        }
      }
    } else if (h == ":goal") {
      if (sec->items.size() != 2) fail(sec->location, "expected (:goal <condition>)");
      pm.goal = p.condition(sec->items[1]);
      goal_loc = sec->location;
      have_goal = true;
    } else if (h == ":metric") {
      fail(sec->location, "unsupported section ':metric'");
    } else {
      fail(sec->location, "unknown problem section '" +
                              (sec->is_list && !sec->items.empty() ? sec->items[0].atom
                                                                   : sec->atom) +
                              "'");
    }
  }
  if (!pm.fragment && !have_goal) fail(top[0].location, "problem has no :goal");

  for (const auto& item : pm.goal.items) {
    std::vector<std::string> args;
    auto add_expr = [&](const Expr& e) {
      std::vector<const Expr*> fl;
      collect_fluents(e, fl);
      for (const Expr* f : fl) args.insert(args.end(), f->args.begin(), f->args.end());
      if (e.mentions_time()) fail(goal_loc, "'#t' is not allowed in a goal");
    };
    if (const auto* lit = std::get_if<Literal>(&item)) {
      args = lit->atom.args;
    } else {
      add_expr(std::get<Comparison>(item).lhs);
      add_expr(std::get<Comparison>(item).rhs);
    }
    for (const auto& a : args)
      if (is_variable(a)) fail(goal_loc, "goal must be ground, found variable " + a);
    references.emplace_back(goal_loc, args);
  }

  if (objects_declared) {
    std::set<std::string> known;
    for (const auto& o : pm.objects) known.insert(o.name);
    if (domain)
      for (const auto& c : domain->constants) known.insert(c.name);
    for (const auto& [loc, args] : references)
      for (const auto& a : args)
        if (!known.count(a)) fail(loc, "reference to undeclared object '" + a + "'");
  }
  return pm;
}

}  // namespace gravplan::pddl
