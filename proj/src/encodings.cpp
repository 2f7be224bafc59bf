#include "gravplan/encodings.hpp"

#include <fmt/format.h>

#include <cmath>

#include "gravplan/pddl/parser.hpp"
#include "gravplan/pddl/printer.hpp"

namespace gravplan {

std::string GravityFormulation::label() const {
  switch (kind) {
    case Kind::NG: return "NG";
    case Kind::UCM: return fmt::format("UCM{:.1f}", value);
    case Kind::UACM: return fmt::format("UACM{:.1f}", value);
  }
  return "NG";
}

GravityFormulation GravityFormulation::parse(const std::string& label) {
  auto number = [&](std::size_t prefix) {
    std::string rest = label.substr(prefix);
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (rest.empty() || used != rest.size() || !(v > 0))
      throw std::invalid_argument("bad formulation label '" + label + "'");
    return v;
  };
  if (label == "NG") return ng();
  if (label.rfind("UACM", 0) == 0) return uacm(number(4));
  if (label.rfind("UCM", 0) == 0) return ucm(number(3));
  throw std::invalid_argument("bad formulation label '" + label + "'");
}

std::vector<GravityFormulation> benchmark_formulations() {
  return {GravityFormulation::ng(),        GravityFormulation::ucm(0.1),
          GravityFormulation::ucm(0.5),    GravityFormulation::ucm(1.0),
          GravityFormulation::uacm(0.1),   GravityFormulation::uacm(0.5)};
}

std::string domain_name(const GravityFormulation& f) {
  switch (f.kind) {
    case GravityFormulation::Kind::NG: return "articulated-ng";
    case GravityFormulation::Kind::UCM: return "articulated-ucm";
    case GravityFormulation::Kind::UACM: return "articulated-uacm";
  }
  return "articulated-ng";
}

namespace {

using Kind = GravityFormulation::Kind;

std::string robot_schemas(const char* dir, const char* speed, const char* op,
                          const EncodingOptions& opts) {
  // dir: increase / decrease; token predicate differs only in prefix.
  std::string token = fmt::format("{}-angle-robot", dir[0] == 'i' ? "increasing" : "decreasing");
  std::string grasp_add = opts.both_directions ? "\n    (grasping ?l1 ?l2)" : "";
  std::string grasp_del = opts.both_directions ? "\n    (not (grasping ?l1 ?l2))" : "";
  std::string stop_hold = opts.both_directions ? "(grasping ?l1 ?l2)" : "(not (free-to-move ?l1))";
  std::string out = fmt::format(
      R"((:action start-{0}
:parameters (?l1 - link ?l2 - link ?x - plane)
:precondition (and
    (connected ?l1 ?l2)
    (not (in-use)))
:effect (and
    (in-use)
    (not (free-to-move ?l2))
    (not (free-to-move ?l1))
    ({1} ?l2 ?x){2}))

(:action stop-{0}
:parameters (?l1 - link ?l2 - link ?x - plane)
:precondition (and
    (connected ?l1 ?l2)
    ({1} ?l2 ?x)
    {3})
:effect (and
    (not (in-use))
    (free-to-move ?l1)
    (free-to-move ?l2)
    (not ({1} ?l2 ?x)){4}))

(:process move-{0}
:parameters (?l - link ?x - plane)
:precondition ({1} ?l ?x)
:effect ({5} (angle ?l ?x) (* #t ({6}))))

)",
      dir, token, grasp_add, stop_hold, grasp_del, op, speed);
  if (opts.both_directions) {
    out += fmt::format(
        R"((:process propagate-{0}
:parameters (?l1 - link ?l2 - link ?l3 - link ?x - plane)
:precondition (and
    (grasping ?l1 ?l2)
    ({1} ?l2 ?x)
    (carries ?l1 ?l2 ?l3))
:effect ({2} (angle ?l3 ?x) (* #t ({3}))))

)",
        dir, token, op, speed);
  } else {
    out += fmt::format(
        R"((:process propagate-{0}
:parameters (?l1 - link ?l2 - link ?x - plane)
:precondition (and
    ({1} ?l1 ?x)
    (affects ?l1 ?l2 ?x))
:effect ({2} (angle ?l2 ?x) (* #t ({3}))))

)",
        dir, token, op, speed);
  }
  return out;
}

constexpr const char* kWrapEvents = R"((:event back-to-zero
:parameters (?l3 - link ?x - plane)
:precondition (>= (angle ?l3 ?x) 360)
:effect (assign (angle ?l3 ?x) 0))

(:event back-to-360
:parameters (?l3 - link ?x - plane)
:precondition (< (angle ?l3 ?x) 0)
:effect (assign (angle ?l3 ?x) 359))

)";

std::string gravity_schemas(Kind kind) {
  std::string rate = kind == Kind::UACM ? "(gspeed ?l1)" : "(speed-g)";
  std::string out = fmt::format(
      R"((:process gravity-increase
:parameters (?l1 - link)
:precondition (and
    (free-to-move ?l1)
    (> (angle ?l1 z-axis) 180)
    (< (angle ?l1 z-axis) 360))
:effect (and
    (increase (angle ?l1 z-axis) (* #t {0}))
    (increasing-angle-gravity ?l1)))

(:process gravity-decrease
:parameters (?l1 - link)
:precondition (and
    (free-to-move ?l1)
    (> (angle ?l1 z-axis) 0)
    (< (angle ?l1 z-axis) 180))
:effect (and
    (decrease (angle ?l1 z-axis) (* #t {0}))
    (decreasing-angle-gravity ?l1)))

(:process propagate-gravity-increase
:parameters (?l1 - link ?l2 - link)
:precondition (and
    (free-to-move ?l1)
    (> (angle ?l1 z-axis) 180)
    (< (angle ?l1 z-axis) 360)
    (affects ?l1 ?l2 z-axis)
    (not (free-to-move ?l2)))
:effect (increase (angle ?l2 z-axis) (* #t {0})))

(:process propagate-gravity-decrease
:parameters (?l1 - link ?l2 - link)
:precondition (and
    (free-to-move ?l1)
    (> (angle ?l1 z-axis) 0)
    (< (angle ?l1 z-axis) 180)
    (affects ?l1 ?l2 z-axis)
    (not (free-to-move ?l2)))
:effect (decrease (angle ?l2 z-axis) (* #t {0})))

(:event gravity-increase-end-grasped
:parameters (?l1 - link)
:precondition (and
    (increasing-angle-gravity ?l1)
    (not (free-to-move ?l1)))
:effect (not (increasing-angle-gravity ?l1)))

(:event gravity-increase-end-rest
:parameters (?l1 - link)
:precondition (and
    (increasing-angle-gravity ?l1)
    (<= (angle ?l1 z-axis) 180))
:effect (not (increasing-angle-gravity ?l1)))

(:event gravity-decrease-end-grasped
:parameters (?l1 - link)
:precondition (and
    (decreasing-angle-gravity ?l1)
    (not (free-to-move ?l1)))
:effect (not (decreasing-angle-gravity ?l1)))

(:event gravity-decrease-end-rest-low
:parameters (?l1 - link)
:precondition (and
    (decreasing-angle-gravity ?l1)
    (<= (angle ?l1 z-axis) 0))
:effect (not (decreasing-angle-gravity ?l1)))

(:event gravity-decrease-end-rest-high
:parameters (?l1 - link)
:precondition (and
    (decreasing-angle-gravity ?l1)
    (>= (angle ?l1 z-axis) 180))
:effect (not (decreasing-angle-gravity ?l1)))

)",
      rate);
  if (kind == Kind::UACM) {
    out += R"((:process gravity-accelerate-increase
:parameters (?l1 - link)
:precondition (and
    (free-to-move ?l1)
    (> (angle ?l1 z-axis) 180)
    (< (angle ?l1 z-axis) 360))
:effect (increase (gspeed ?l1) (* #t (accel-g))))

(:process gravity-accelerate-decrease
:parameters (?l1 - link)
:precondition (and
    (free-to-move ?l1)
    (> (angle ?l1 z-axis) 0)
    (< (angle ?l1 z-axis) 180))
:effect (increase (gspeed ?l1) (* #t (accel-g))))

(:event gravity-speed-reset
:parameters (?l1 - link)
:precondition (and
    (> (gspeed ?l1) 0)
    (not (increasing-angle-gravity ?l1))
    (not (decreasing-angle-gravity ?l1)))
:effect (assign (gspeed ?l1) 0))

)";
  }
  return out;
}

void indent_block(std::string& out, const std::string& block) {
  std::size_t start = 0;
  while (start < block.size()) {
    std::size_t end = block.find('\n', start);
    if (end == std::string::npos) end = block.size();
    if (end > start) out += "  " + block.substr(start, end - start);
    out += "\n";
    start = end + 1;
  }
}

}  // namespace

std::string encode_domain_text(const GravityFormulation& f, const EncodingOptions& opts) {
  std::string out;
  if (f.kind == Kind::UACM)
    out += "; gravity-accelerate-* processes and the gravity-speed-reset event are\n"
           "; reconstructed from the UACM description; no reference text exists for them.\n";
  out += fmt::format("(define (domain {})\n", domain_name(f));
  out += "  (:requirements :typing :fluents :time :negative-preconditions)\n";
  out += "  (:types link plane)\n";
  out += "  (:constants xy-axes z-axis - plane)\n";
  out += "  (:predicates\n"
         "    (connected ?l1 - link ?l2 - link)\n"
         "    (affects ?l1 - link ?l2 - link ?x - plane)\n"
         "    (in-use)\n"
         "    (free-to-move ?l - link)\n"
         "    (increasing-angle-robot ?l - link ?x - plane)\n"
         "    (decreasing-angle-robot ?l - link ?x - plane)";
  if (opts.both_directions)
    out += "\n    (grasping ?l1 - link ?l2 - link)"
           "\n    (carries ?l1 - link ?l2 - link ?l3 - link)";
  if (f.kind != Kind::NG)
    out += "\n    (increasing-angle-gravity ?l - link)"
           "\n    (decreasing-angle-gravity ?l - link)";
  out += ")\n";
  out += "  (:functions\n"
         "    (angle ?l - link ?x - plane)\n"
         "    (speed-i)\n"
         "    (speed-d)";
  if (f.kind == Kind::UCM) out += "\n    (speed-g)";
  if (f.kind == Kind::UACM) out += "\n    (gspeed ?l - link)\n    (accel-g)";
  out += ")\n\n";

  std::string body = robot_schemas("increase", "speed-i", "increase", opts) +
                     robot_schemas("decrease", "speed-d", "decrease", opts) + kWrapEvents;
  if (f.kind != Kind::NG) body += gravity_schemas(f.kind);
  while (!body.empty() && body.back() == '\n') body.pop_back();
  indent_block(out, body);
  out += ")\n";
  return out;
}

pddl::DomainModel encode_domain(const GravityFormulation& f, const EncodingOptions& opts) {
  return pddl::parse_domain(encode_domain_text(f, opts));
}

std::string encode_problem_text(const Task& t, const GravityFormulation& f,
                                const std::string& problem_name, const EncodingOptions& opts) {
  const std::size_t n = t.object.size();
  if (t.initial.size() != n)
    throw EncodingError(fmt::format("initial configuration has {} links, object has {}",
                                    t.initial.size(), n));
  for (const auto& g : t.goal) {
    if (g.link == 1) throw EncodingError("goal references link 1, the base reference link");
    if (g.link < 1 || g.link > n)
      throw EncodingError(fmt::format("goal references unknown link {}", g.link));
    if (!(g.threshold > 0 && g.threshold < 360))
      throw EncodingError(fmt::format("goal threshold {} outside (0, 360)", g.threshold));
  }
  if (f.kind != Kind::NG && !(f.value > 0))
    throw EncodingError("gravity rate must be positive");

  using pddl::format_number;
  std::string out = fmt::format("(define (problem {})\n  (:domain {})\n  (:objects", problem_name,
                                domain_name(f));
  for (LinkIndex k = 1; k <= n; ++k) out += " " + link_name(k);
  out += " - link)\n  (:init\n";
  out += fmt::format("    (= (speed-i) {})\n", format_number(t.rates.speed_i));
  out += fmt::format("    (= (speed-d) {})\n", format_number(t.rates.speed_d));
  if (f.kind == Kind::UCM) out += fmt::format("    (= (speed-g) {})\n", format_number(f.value));
  for (LinkIndex k = 1; k <= n; ++k)
    for (Plane p : kPlanes)
      out += fmt::format("    (= (angle {} {}) {})\n", link_name(k), plane_token(p),
                         format_number(t.initial.at(k).on(p)));
  if (f.kind == Kind::UACM) {
    out += fmt::format("    (= (accel-g) {})\n", format_number(f.value));
    for (LinkIndex k = 1; k <= n; ++k) out += fmt::format("    (= (gspeed {}) 0)\n", link_name(k));
  }
  for (auto [a, b] : t.object.connected()) {
    out += fmt::format("    (connected {} {})\n", link_name(a), link_name(b));
    if (opts.both_directions) out += fmt::format("    (connected {} {})\n", link_name(b), link_name(a));
  }
  for (LinkIndex a = 1; a <= n; ++a)
    for (LinkIndex b = a + 1; b <= n; ++b)
      for (Plane p : kPlanes)
        out += fmt::format("    (affects {} {} {})\n", link_name(a), link_name(b), plane_token(p));
  if (opts.both_directions) {
    for (auto [a, b] : t.object.connected()) {
      for (auto [hold, move] : {std::pair{a, b}, std::pair{b, a}})
        for (LinkIndex c : affected_links(t.object, hold, move))
          if (c != move)
            out += fmt::format("    (carries {} {} {})\n", link_name(hold), link_name(move),
                               link_name(c));
    }
  }
  for (LinkIndex k = 1; k <= n; ++k) out += fmt::format("    (free-to-move {})\n", link_name(k));
  out += "  )\n  (:goal (and";
  for (const auto& g : t.goal)
    out += fmt::format("\n    ({} (angle {} {}) {})", pddl::comparator_token(g.op),
                       link_name(g.link), plane_token(g.plane), format_number(g.threshold));
  out += "))\n)\n";
  return out;
}

pddl::ProblemModel encode_problem(const Task& t, const GravityFormulation& f,
                                  const std::string& problem_name, const EncodingOptions& opts) {
  pddl::DomainModel d = encode_domain(f, opts);
  return pddl::parse_problem(encode_problem_text(t, f, problem_name, opts), &d);
}

}  // namespace gravplan
