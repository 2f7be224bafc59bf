#include "naive_stepper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

using namespace gravplan::pddl;

NaiveStepper::NaiveStepper(const DomainModel& domain, const ProblemModel& problem)
    : domain_(domain), problem_(problem) {
  for (const auto& c : domain.constants) object_type_[c.name] = c.type;
  for (const auto& o : problem.objects) object_type_[o.name] = o.type;
  actions_ = instantiate(domain.actions);
  processes_ = instantiate(domain.processes);
  events_ = instantiate(domain.events);
  std::sort(events_.begin(), events_.end(),
            [](const Instance& a, const Instance& b) { return a.key < b.key; });
}

bool NaiveStepper::is_a(const std::string& object, const std::string& type) const {
  auto it = object_type_.find(object);
  if (it == object_type_.end()) return false;
  std::string t = it->second;
  for (int guard = 0; guard < 64; ++guard) {
    if (t == type || type == "object") return true;
    auto parent = std::find_if(domain_.types.begin(), domain_.types.end(),
                               [&](const TypedName& n) { return n.name == t; });
    if (parent == domain_.types.end() || parent->type == t) return false;
    t = parent->type;
  }
  return false;
}

std::vector<NaiveStepper::Instance> NaiveStepper::instantiate(
    const std::vector<Schema>& schemas) const {
  std::vector<Instance> out;
  for (const Schema& s : schemas) {
    std::vector<std::vector<std::string>> domains;
    for (const auto& p : s.params) {
      std::vector<std::string> objs;
      for (const auto& [name, type] : object_type_)
        if (is_a(name, p.type)) objs.push_back(name);
      domains.push_back(objs);
    }
    std::vector<std::size_t> idx(s.params.size(), 0);
    bool done = std::any_of(domains.begin(), domains.end(),
                            [](const auto& d) { return d.empty(); });
    while (!done) {
      Instance inst{&s, {}, {s.name}, "(" + s.name};
      for (std::size_t i = 0; i < idx.size(); ++i) {
        inst.binding[s.params[i].name] = domains[i][idx[i]];
        inst.key.push_back(domains[i][idx[i]]);
        inst.label += " " + domains[i][idx[i]];
      }
      inst.label += ")";
      out.push_back(std::move(inst));
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == domains[k].size()) idx[k++] = 0;
      done = k == idx.size();
    }
  }
  return out;
}

std::string NaiveStepper::ground_atom(const Atom& a, const Binding& b) const {
  std::string out = "(" + a.predicate;
  for (const auto& arg : a.args) {
    auto it = b.find(arg);
    std::string v = it != b.end() ? it->second : arg;
    if (v == "zaxis") v = "z-axis";
    out += " " + v;
  }
  return out + ")";
}

double NaiveStepper::eval(const Expr& e, const NaiveState& s, const Binding& b, double t) const {
  switch (e.kind) {
    case Expr::Kind::Number: return e.value;
    case Expr::Kind::Time: return t;
    case Expr::Kind::Fluent: {
      auto it = s.fluents.find(ground_atom(Atom{e.name, e.args}, b));
      if (it == s.fluents.end()) throw std::runtime_error("undefined fluent in oracle");
      return it->second;
    }
    case Expr::Kind::Add: return eval(e.children[0], s, b, t) + eval(e.children[1], s, b, t);
    case Expr::Kind::Sub:
      if (e.children.size() == 1) return -eval(e.children[0], s, b, t);
      return eval(e.children[0], s, b, t) - eval(e.children[1], s, b, t);
    case Expr::Kind::Mul: return eval(e.children[0], s, b, t) * eval(e.children[1], s, b, t);
    case Expr::Kind::Div: return eval(e.children[0], s, b, t) / eval(e.children[1], s, b, t);
  }
  return 0.0;
}

bool NaiveStepper::holds(const Condition& c, const NaiveState& s, const Binding& b,
                         double eps) const {
  for (const auto& item : c.items) {
    if (const auto* lit = std::get_if<Literal>(&item)) {
      bool present = s.atoms.count(ground_atom(lit->atom, b)) > 0;
      if (present != lit->positive) return false;
    } else {
      const auto& cmp = std::get<Comparison>(item);
      double d = eval(cmp.lhs, s, b, 0.0) - eval(cmp.rhs, s, b, 0.0);
      bool ok = false;
      switch (cmp.op) {
        case Comparator::Less: ok = d < -eps; break;
        case Comparator::LessEq: ok = d <= eps; break;
        case Comparator::Greater: ok = d > eps; break;
        case Comparator::GreaterEq: ok = d >= -eps; break;
        case Comparator::Equal: ok = std::fabs(d) <= eps; break;
      }
      if (!ok) return false;
    }
  }
  return true;
}

void NaiveStepper::apply_effects(const Instance& inst, NaiveState& s) const {
  const NaiveState before = s;
  for (const auto& item : inst.schema->effect) {
    if (const auto* ne = std::get_if<NumericEffect>(&item)) {
      std::string f = ground_atom(ne->fluent, inst.binding);
      double v = eval(ne->value, before, inst.binding, 0.0);
      double& cur = s.fluents[f];
      if (ne->op == NumericOp::Assign)
        cur = v;
      else if (ne->op == NumericOp::Increase)
        cur += v;
      else
        cur -= v;
    }
  }
  for (const auto& item : inst.schema->effect)
    if (const auto* lit = std::get_if<Literal>(&item); lit && !lit->positive)
      s.atoms.erase(ground_atom(lit->atom, inst.binding));
  for (const auto& item : inst.schema->effect)
    if (const auto* lit = std::get_if<Literal>(&item); lit && lit->positive)
      s.atoms.insert(ground_atom(lit->atom, inst.binding));
}

NaiveState NaiveStepper::initial() const {
  NaiveState s;
  Binding none;
  for (const auto& a : problem_.init_atoms) s.atoms.insert(ground_atom(a, none));
  for (const auto& v : problem_.init_values) s.fluents[ground_atom(v.fluent, none)] = v.value;
  return s;
}

void NaiveStepper::stabilize(NaiveState& s, std::vector<std::string>* fired) const {
  int firings = 0;
  for (bool any = true; any;) {
    any = false;
    for (const auto& e : events_) {
      if (!holds(e.schema->precondition, s, e.binding, 0.0)) continue;
      if (++firings > 1000) throw std::runtime_error("oracle: event cascade divergence");
      apply_effects(e, s);
      if (fired) fired->push_back(e.label);
      any = true;
    }
  }
}

void NaiveStepper::step(NaiveState& s, double delta, std::vector<std::string>* fired) const {
  const NaiveState before = s;
  std::vector<const Instance*> active;
  for (const auto& p : processes_)
    if (holds(p.schema->precondition, before, p.binding, 0.0)) active.push_back(&p);
  std::map<std::string, double> change;
  for (const Instance* p : active)
    for (const auto& item : p->schema->effect)
      if (const auto* ne = std::get_if<NumericEffect>(&item)) {
        double v = eval(ne->value, before, p->binding, delta);
        change[ground_atom(ne->fluent, p->binding)] +=
            ne->op == NumericOp::Decrease ? -v : v;
      }
  for (const auto& [f, d] : change) s.fluents[f] += d;
  for (const Instance* p : active)
    for (const auto& item : p->schema->effect)
      if (const auto* lit = std::get_if<Literal>(&item); lit && !lit->positive)
        s.atoms.erase(ground_atom(lit->atom, p->binding));
  for (const Instance* p : active)
    for (const auto& item : p->schema->effect)
      if (const auto* lit = std::get_if<Literal>(&item); lit && lit->positive)
        s.atoms.insert(ground_atom(lit->atom, p->binding));
  stabilize(s, fired);
}

std::vector<std::string> NaiveStepper::applicable_actions(const NaiveState& s) const {
  std::vector<std::string> out;
  for (const auto& a : actions_)
    if (holds(a.schema->precondition, s, a.binding, 1e-6)) out.push_back(a.label);
  return out;
}

void NaiveStepper::apply(NaiveState& s, const std::string& label) const {
  for (const auto& a : actions_)
    if (a.label == label) {
      if (!holds(a.schema->precondition, s, a.binding, 1e-6))
        throw std::runtime_error("oracle: inapplicable " + label);
      apply_effects(a, s);
      return;
    }
  throw std::runtime_error("oracle: unknown action " + label);
}

bool NaiveStepper::goal_holds(const NaiveState& s) const {
  return holds(problem_.goal, s, {}, 1e-6);
}

}  // namespace oracle
