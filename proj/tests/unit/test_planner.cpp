#include <atomic>

#include "doctest.h"
#include "gravplan/planner.hpp"
#include "gravplan/semantics.hpp"
#include "gravplan/validator.hpp"
#include "support.hpp"

using namespace gravplan;
using pddl::Comparator;

TEST_CASE("name round trips") {
  for (auto h : {HeuristicKind::Blind, HeuristicKind::UnsatCount, HeuristicKind::AngularRate})
    CHECK(parse_heuristic(heuristic_name(h)) == h);
  for (auto s : {SearchKind::GreedyBestFirst, SearchKind::WeightedAStar})
    CHECK(parse_search(search_name(s)) == s);
  CHECK(parse_search("gbfs") == SearchKind::GreedyBestFirst);
  CHECK(reason_name(UnsolvedReason::Timeout) == "timeout");
  CHECK_THROWS(parse_heuristic("magic"));
}

TEST_CASE("successors of the reference initial state") {
  auto l = testing::load(testing::reference_task(), GravityFormulation::ucm(0.5));
  const auto& t = l->grounded;
  auto succ = successors(t, t.init, 1.0);
  std::size_t starts = 0, waits = 0;
  for (const auto& [h, s] : succ) {
    if (h == kWait) {
      ++waits;
      CHECK(s.time == 1.0);
    } else {
      CHECK(t.actions[h].name.rfind("start-", 0) == 0);
      CHECK(s.time == 0.0);
      ++starts;
    }
  }
  CHECK(starts == 12);
  CHECK(waits == 1);

  auto mid = apply_action(t, t.init, testing::action(t, "(start-increase L2 L3 z-axis)"));
  stabilize(t, mid);
  succ = successors(t, mid, 1.0);
  REQUIRE(succ.size() == 2);
  CHECK(t.actions[succ[0].first].label() == "(stop-increase L2 L3 z-axis)");
  CHECK(succ[1].first == kWait);

  auto goal_task = testing::reference_task();
  goal_task.goal = {{4, Plane::Z, Comparator::Less, 5.5}};
  auto g = testing::load(goal_task, GravityFormulation::ucm(0.5));
  CHECK(goal_satisfied(g->grounded, g->grounded.init));
  CHECK(successors(g->grounded, g->grounded.init, 1.0).size() == 13);
}

TEST_CASE("angular-rate heuristic") {
  auto task = testing::reference_task();
  task.goal = {{2, Plane::XY, Comparator::Greater, 265.4}};
  auto l = testing::load(task, GravityFormulation::ng());
  CHECK(heuristic_angular_rate(l->grounded, l->grounded.init) == doctest::Approx(9.46));

  task.goal = {{2, Plane::XY, Comparator::Greater, 30.0}, {3, Plane::XY, Comparator::Greater, 72.0}};
  l = testing::load(task, GravityFormulation::ng());
  CHECK(heuristic_angular_rate(l->grounded, l->grounded.init) == doctest::Approx(7.2));

  task.goal = {{4, Plane::Z, Comparator::Less, 5.5}};
  l = testing::load(task, GravityFormulation::ng());
  CHECK(heuristic_angular_rate(l->grounded, l->grounded.init) == 0.0);
  CHECK(evaluate_heuristic(l->grounded, l->grounded.init, HeuristicKind::UnsatCount) == 0.0);
  CHECK(evaluate_heuristic(l->grounded, l->grounded.init, HeuristicKind::Blind) == 0.0);
}

TEST_CASE("plan on a satisfied initial state is empty") {
  auto task = testing::reference_task();
  task.goal = {{4, Plane::Z, Comparator::Less, 5.5}};
  auto l = testing::load(task, GravityFormulation::ucm(0.5));
  auto r = plan(l->grounded);
  CHECK(r.solved);
  CHECK(r.plan.actions.empty());
  CHECK(r.plan.makespan() == 0.0);
}

TEST_CASE("small corpus cells are fully solved and valid") {
  PlannerConfig cfg;
  cfg.cutoff = 60;
  for (auto [size, f] : {std::pair{std::size_t{3}, GravityFormulation::ng()},
                         std::pair{std::size_t{4}, GravityFormulation::ucm(0.5)}}) {
    for (std::size_t idx = 1; idx <= 5; ++idx) {
      auto l = testing::load_corpus_task(size, idx, f);
      auto r = plan(l->grounded, cfg);
      CAPTURE(size);
      CAPTURE(idx);
      REQUIRE(r.solved);
      CHECK(validate_plan(l->grounded, r.plan, cfg.delta).valid);
    }
  }
}

TEST_CASE("every search configuration solves a short task") {
  auto task = testing::reference_task();
  task.goal = {{2, Plane::XY, Comparator::Greater, 25.0}, {4, Plane::Z, Comparator::Greater, 12.0}};
  auto l = testing::load(task, GravityFormulation::ng());
  for (auto h : {HeuristicKind::Blind, HeuristicKind::UnsatCount, HeuristicKind::AngularRate})
    for (auto s : {SearchKind::GreedyBestFirst, SearchKind::WeightedAStar})
      for (bool helpful : {true, false}) {
        PlannerConfig cfg;
        cfg.heuristic = h;
        cfg.search = s;
        cfg.weight = 2.0;
        cfg.cutoff = 30;
        cfg.helpful_actions = helpful;
        auto r = plan(l->grounded, cfg);
        CAPTURE(heuristic_name(h));
        CAPTURE(search_name(s));
        REQUIRE(r.solved);
        CHECK(validate_plan(l->grounded, r.plan, 1.0).valid);
      }
}

TEST_CASE("contradictory goal is not solved") {
  auto task = testing::reference_task();
  task.goal = {{2, Plane::XY, Comparator::Greater, 200.0}, {2, Plane::XY, Comparator::Less, 100.0}};
  auto l = testing::load(task, GravityFormulation::ng());
  PlannerConfig cfg;
  cfg.cutoff = 0.5;
  auto r = plan(l->grounded, cfg);
  CHECK_FALSE(r.solved);
  CHECK((r.reason == UnsolvedReason::Timeout || r.reason == UnsolvedReason::Exhausted));
}

TEST_CASE("resource limits") {
  auto l = testing::load_corpus_task(5, 1, GravityFormulation::uacm(0.1));
  PlannerConfig cfg;
  cfg.cutoff = 0.001;
  auto r = plan(l->grounded, cfg);
  CHECK_FALSE(r.solved);
  CHECK(r.reason == UnsolvedReason::Timeout);

  cfg.cutoff = 60;
  cfg.memory_cap = 1 << 16;
  r = plan(l->grounded, cfg);
  CHECK_FALSE(r.solved);
  CHECK(r.reason == UnsolvedReason::Memory);

  std::atomic<bool> cancel{true};
  cfg.memory_cap = std::size_t{1} << 30;
  cfg.cancel = &cancel;
  r = plan(l->grounded, cfg);
  CHECK_FALSE(r.solved);
  CHECK(r.reason == UnsolvedReason::Timeout);
}

TEST_CASE("invalid configurations are errors") {
  auto l = testing::load(testing::reference_task(), GravityFormulation::ng());
  PlannerConfig cfg;
  cfg.delta = 0;
  CHECK_THROWS_AS(plan(l->grounded, cfg), PlannerError);
  cfg = {};
  cfg.weight = 0.5;
  CHECK_THROWS_AS(plan(l->grounded, cfg), PlannerError);
  cfg = {};
  cfg.cutoff = -1;
  CHECK_THROWS_AS(plan(l->grounded, cfg), PlannerError);
}

TEST_CASE("search is deterministic") {
  auto l = testing::load_corpus_task(4, 2, GravityFormulation::uacm(0.5));
  PlannerConfig cfg;
  cfg.cutoff = 60;
  auto a = plan(l->grounded, cfg);
  auto b = plan(l->grounded, cfg);
  REQUIRE(a.solved);
  CHECK(a.plan == b.plan);
  CHECK(a.expanded == b.expanded);
  CHECK(a.generated == b.generated);
}
