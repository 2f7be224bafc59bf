#include <cmath>
#include <random>

#include "doctest.h"
#include "equivalence.hpp"
#include "gravplan/generator.hpp"
#include "gravplan/pddl/parser.hpp"
#include "gravplan/pddl/printer.hpp"
#include "gravplan/planner.hpp"
#include "gravplan/semantics.hpp"
#include "gravplan/validator.hpp"
#include "support.hpp"

using namespace gravplan;

namespace {

std::vector<std::uint32_t> angle_fluents(const GroundedTask& t) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < t.fluent_names.size(); ++i)
    if (t.fluent_names[i].rfind("(angle ", 0) == 0) out.push_back(i);
  return out;
}

std::size_t robot_tokens(const GroundedTask& t, const HybridState& s) {
  std::size_t n = 0;
  for (std::uint32_t i = 0; i < t.atom_names.size(); ++i)
    if (s.atoms.test(i) && t.atom_names[i].find("-angle-robot ") != std::string::npos) ++n;
  return n;
}

}  // namespace

TEST_CASE("random walks keep angles wrapped and the in-use token consistent") {
  std::mt19937_64 rng(11);
  for (const auto& f : benchmark_formulations()) {
    for (int trial = 0; trial < 20; ++trial) {
      auto l = testing::load_generated(2 + trial % 5, rng(), f);
      const auto& t = l->grounded;
      auto angles = angle_fluents(t);
      auto in_use = testing::atom(t, "(in-use)");
      HybridState s = t.init;
      stabilize(t, s);
      for (int step = 0; step < 120; ++step) {
        if (rng() % 4 == 0) {
          std::vector<std::uint32_t> app;
          for (std::uint32_t a = 0; a < t.actions.size(); ++a)
            if (applicable(t, s, a)) app.push_back(a);
          if (!app.empty()) {
            apply_action_in_place(t, s, app[rng() % app.size()]);
            stabilize(t, s);
          }
        }
        s = advance(t, s, 1.0).state;
        for (auto i : angles) {
          CHECK(s.numeric[i] >= 0.0);
          CHECK(s.numeric[i] < 360.0);
        }
        CHECK(s.atoms.test(in_use) == (robot_tokens(t, s) == 1));
        CHECK(robot_tokens(t, s) <= 1);
      }
    }
  }
}

TEST_CASE("advance is deterministic") {
  std::mt19937_64 rng(5);
  for (const auto& f : benchmark_formulations()) {
    auto l = testing::load_generated(4, rng(), f);
    const auto& t = l->grounded;
    HybridState s = t.init;
    testing::randomize_angles(t, s, rng);
    stabilize(t, s);
    for (int k = 0; k < 50; ++k) {
      auto a = advance(t, s, 1.0);
      auto b = advance(t, s, 1.0);
      CHECK(a.state == b.state);
      CHECK(a.fired == b.fired);
      s = a.state;
    }
  }
}

TEST_CASE("NG never moves angles without a robot token") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    auto l = testing::load_generated(2 + trial % 7, rng(), GravityFormulation::ng());
    const auto& t = l->grounded;
    HybridState s = t.init;
    testing::randomize_angles(t, s, rng);
    stabilize(t, s);
    auto before = s.numeric;
    for (int k = 0; k < 30; ++k) s = advance(t, s, 1.0).state;
    CHECK(s.numeric == before);
  }
}

TEST_CASE("generated encodings ground cleanly and round-trip") {
  for (const auto& f : benchmark_formulations()) {
    auto dtext = encode_domain_text(f);
    auto d = pddl::parse_domain(dtext);
    CHECK(pddl::parse_domain(pddl::print_domain(d)) == d);
    for (std::size_t L = 2; L <= 12; L += 2) {
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        GenSpec spec;
        spec.size = L;
        spec.seed = seed;
        auto p = pddl::parse_problem(encode_problem_text(generate_task(spec), f), &d);
        CHECK(pddl::parse_problem(pddl::print_problem(p), &d) == p);
        auto g = ground(d, p);
        CHECK(g.diagnostics.empty());
        std::size_t starts = 0;
        for (const auto& a : g.actions) starts += a.name == "start-increase";
        CHECK(starts == (L - 1) * 2);
      }
    }
  }
}

TEST_CASE("oracle equivalence on short traces") {
  for (const auto& f : benchmark_formulations()) {
    auto stats = oracle::compare_traces(f, 40, 30, 1234);
    CAPTURE(f.label());
    CAPTURE(stats.first_mismatch);
    CHECK(stats.mismatches == 0);
    CHECK(stats.max_error <= 1e-9);
  }
}

TEST_CASE("angular-rate heuristic never exceeds the makespan of found plans") {
  std::mt19937_64 rng(77);
  std::size_t checked = 0;
  PlannerConfig cfg;
  cfg.cutoff = 20;
  for (int trial = 0; trial < 120; ++trial) {
    auto f = benchmark_formulations()[trial % 6];
    auto l = testing::load_generated(2 + trial % 2, rng(), f);
    const auto& t = l->grounded;
    HybridState s = t.init;
    stabilize(t, s);
    double h = heuristic_angular_rate(t, s);
    auto r = plan(t, cfg);
    if (!r.solved) continue;
    ++checked;
    CAPTURE(f.label());
    CAPTURE(trial);
    CHECK(h <= r.plan.makespan() + 1e-9);
  }
  CHECK(checked >= 100);
}
