#include "equivalence.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "gravplan/semantics.hpp"
#include "naive_stepper.hpp"
#include "support.hpp"

namespace oracle {

using namespace gravplan;

namespace {

struct Checker {
  const GroundedTask& task;
  EquivalenceStats& stats;
  double tolerance;

  void mismatch(const std::string& what) {
    if (stats.mismatches++ == 0) stats.first_mismatch = what;
  }

  void state(const HybridState& s, const NaiveState& n, const std::string& where) {
    ++stats.comparisons;
    for (std::size_t i = 0; i < task.fluent_names.size(); ++i) {
      auto it = n.fluents.find(task.fluent_names[i]);
      if (it == n.fluents.end()) {
        if (!std::isnan(s.numeric[i])) mismatch(where + ": oracle lacks " + task.fluent_names[i]);
        continue;
      }
      double err = std::fabs(it->second - s.numeric[i]);
      stats.max_error = std::max(stats.max_error, err);
      if (!(err <= tolerance))
        mismatch(fmt::format("{}: {} engine {} oracle {}", where, task.fluent_names[i],
                             s.numeric[i], it->second));
    }
    for (std::size_t i = 0; i < task.atom_names.size(); ++i)
      if (s.atoms.test(i) != (n.atoms.count(task.atom_names[i]) > 0))
        mismatch(where + ": atom " + task.atom_names[i]);
    for (const auto& a : n.atoms)
      if (!task.find_atom(a)) mismatch(where + ": engine lacks atom " + a);
  }

  void events(const std::vector<std::uint32_t>& engine, const std::vector<std::string>& naive,
              const std::string& where) {
    std::vector<std::string> labels;
    for (auto i : engine) labels.push_back(task.events[i].label());
    if (labels != naive) mismatch(where + ": fired events differ");
  }
};

}  // namespace

EquivalenceStats compare_traces(const GravityFormulation& f, std::size_t traces,
                                std::size_t steps, std::uint64_t seed, double tolerance) {
  EquivalenceStats stats;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size_dist(2, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double deltas[] = {0.25, 0.5, 1.0, 2.0};

  for (std::size_t tr = 0; tr < traces; ++tr) {
    auto l = testing::load_generated(size_dist(rng), rng(), f);
    const GroundedTask& t = l->grounded;
    NaiveStepper naive(l->domain, l->problem);
    Checker check{t, stats, tolerance};

    HybridState s = t.init;
    NaiveState n = naive.initial();
    check.state(s, n, "init");
    testing::randomize_angles(t, s, rng);
    for (std::size_t i = 0; i < t.fluent_names.size(); ++i)
      if (t.fluent_names[i].rfind("(angle ", 0) == 0) n.fluents[t.fluent_names[i]] = s.numeric[i];
    double delta = deltas[rng() % 4];

    auto stabilize_both = [&](const std::string& where) {
      std::vector<std::uint32_t> fired;
      std::vector<std::string> naive_fired;
      stabilize(t, s, &fired);
      naive.stabilize(n, &naive_fired);
      check.events(fired, naive_fired, where);
      check.state(s, n, where);
    };
    auto maybe_act = [&](const std::string& where) {
      std::vector<std::uint32_t> app;
      for (std::uint32_t a = 0; a < t.actions.size(); ++a)
        if (applicable(t, s, a)) app.push_back(a);
      auto naive_app = naive.applicable_actions(n);
      std::vector<std::string> labels;
      for (auto a : app) labels.push_back(t.actions[a].label());
      std::sort(labels.begin(), labels.end());
      std::sort(naive_app.begin(), naive_app.end());
      if (labels != naive_app) check.mismatch(where + ": applicable actions differ");
      if (app.empty() || unit(rng) > 0.3) return;
      std::uint32_t a = app[rng() % app.size()];
      apply_action_in_place(t, s, a);
      naive.apply(n, t.actions[a].label());
      stabilize_both(where + " after " + t.actions[a].label());
    };

    stabilize_both("start");
    maybe_act("start");
    for (std::size_t k = 0; k < steps; ++k) {
      std::string where = fmt::format("trace {} step {}", tr, k);
      auto r = advance(t, s, delta);
      s = std::move(r.state);
      std::vector<std::string> naive_fired;
      naive.step(n, delta, &naive_fired);
      check.events(r.fired, naive_fired, where);
      check.state(s, n, where);
      if (goal_satisfied(t, s) != naive.goal_holds(n))
        check.mismatch(where + ": goal verdict differs");
      maybe_act(where);
      ++stats.steps;
    }
    ++stats.traces;
  }
  return stats;
}

}  // namespace oracle
