#include "gravplan/plan.hpp"

#include <fmt/format.h>

#include <charconv>
#include <sstream>

#include "gravplan/pddl/grounder.hpp"
#include "gravplan/pddl/parser.hpp"

namespace gravplan {

std::string TimedAction::label() const { return ground_label(name, args); }
std::string TraceEntry::label() const { return ground_label(name, args); }

double Plan::makespan() const {
  double last = actions.empty() ? 0.0 : actions.back().time;
  return end_time && *end_time > last ? *end_time : last;
}

std::string format_time(double t) { return fmt::format("{:.3f}", t); }

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_time(const std::string& s, int line) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw PlanFormatError("line " + std::to_string(line) + ": bad timestamp '" + s + "'");
  return v;
}

}  // namespace

Plan parse_plan(std::string_view text) {
  Plan plan;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string l = trim(raw);
    if (l.empty()) continue;
    if (l[0] == ';') {
      std::string c = trim(std::string_view(l).substr(l.find_first_not_of(';')));
      if (c.rfind("makespan:", 0) == 0) plan.end_time = parse_time(trim(c.substr(9)), line);
      continue;
    }
    auto colon = l.find(':');
    if (colon == std::string::npos)
      throw PlanFormatError("line " + std::to_string(line) + ": expected '<time>: (<action>)'");
    TimedAction a;
    a.time = parse_time(trim(std::string_view(l).substr(0, colon)), line);
    if (a.time < 0) throw PlanFormatError("line " + std::to_string(line) + ": negative time");
    std::string rest = l.substr(colon + 1);
    // Optional `[duration]` suffix used by some planners.
    if (auto br = rest.find('['); br != std::string::npos) rest = rest.substr(0, br);
    std::vector<pddl::SExpr> forms;
    try {
      forms = pddl::read_sexprs(rest);
    } catch (const pddl::ParseError& e) {
      throw PlanFormatError("line " + std::to_string(line) + ": " + e.message());
    }
    if (forms.size() != 1 || !forms[0].is_list || forms[0].items.empty())
      throw PlanFormatError("line " + std::to_string(line) + ": expected one action");
    for (const auto& item : forms[0].items) {
      if (item.is_list) throw PlanFormatError("line " + std::to_string(line) + ": nested list");
      if (a.name.empty())
        a.name = item.atom;
      else
        a.args.push_back(item.atom == "zaxis" ? "z-axis" : item.atom);
    }
    if (!plan.actions.empty() && a.time < plan.actions.back().time)
      throw PlanFormatError("line " + std::to_string(line) + ": timestamps must be nondecreasing");
    plan.actions.push_back(std::move(a));
  }
  return plan;
}

std::string format_plan(const Plan& plan, const std::vector<TraceEntry>* trace) {
  std::ostringstream o;
  if (trace) {
    for (const auto& e : *trace)
      o << (e.is_event ? ";" : "") << format_time(e.time) << ": " << e.label() << "\n";
  } else {
    for (const auto& a : plan.actions) o << format_time(a.time) << ": " << a.label() << "\n";
  }
  double last = plan.actions.empty() ? 0.0 : plan.actions.back().time;
  if (plan.end_time && *plan.end_time > last)
    o << "; makespan: " << format_time(*plan.end_time) << "\n";
  return o.str();
}

}  // namespace gravplan
