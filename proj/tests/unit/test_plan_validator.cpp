#include "doctest.h"
#include "gravplan/plan.hpp"
#include "gravplan/semantics.hpp"
#include "gravplan/validator.hpp"
#include "support.hpp"

using namespace gravplan;

TEST_CASE("reference plan text parses, skipping event annotations") {
  Plan p = parse_plan(testing::read_data("reference_plan.plan"));
  REQUIRE(p.actions.size() == 7);
  CHECK(p.actions[0].time == 1.0);
  CHECK(p.actions[0].label() == "(start-decrease L1 L2 z-axis)");
  CHECK(p.actions[6].time == 13.0);
  CHECK(p.actions[6].label() == "(start-increase L3 L4 z-axis)");
  CHECK(p.makespan() == 13.0);
  CHECK(parse_plan(format_plan(p)) == p);
}

TEST_CASE("plan format details") {
  CHECK(format_time(1) == "1.000");
  Plan p = parse_plan("0.0: (start-increase L1 L2 zaxis) [1.0]\n; makespan: 4.0\n");
  REQUIRE(p.actions.size() == 1);
  CHECK(p.actions[0].args[2] == "z-axis");
  REQUIRE(p.end_time);
  CHECK(p.makespan() == 4.0);
  CHECK(format_plan(p).find("; makespan: 4.000") != std::string::npos);
  CHECK_THROWS_AS(parse_plan("2.0: (a)\n1.0: (b)\n"), PlanFormatError);
  CHECK_THROWS_AS(parse_plan("x: (a)\n"), PlanFormatError);
  std::vector<TraceEntry> trace{{0.0, "start-increase", {"L1", "L2", "xy-axes"}, false},
                                {1.0, "back-to-zero", {"L4", "z-axis"}, true}};
  Plan q;
  q.actions.push_back({0.0, "start-increase", {"L1", "L2", "xy-axes"}});
  std::string text = format_plan(q, &trace);
  CHECK(text.find(";1.000: (back-to-zero L4 z-axis)") != std::string::npos);
}

TEST_CASE("validator verdicts") {
  auto task = testing::reference_task();
  task.goal = {{2, Plane::XY, pddl::Comparator::Greater, 15.0}};
  auto l = testing::load(task, GravityFormulation::ucm(0.5));
  const auto& t = l->grounded;

  Plan good;
  good.actions = {{0.0, "start-increase", {"L1", "L2", "xy-axes"}},
                  {2.0, "stop-increase", {"L1", "L2", "xy-axes"}}};
  auto r = validate_plan(t, good, 1.0);
  CHECK(r.valid);
  CHECK(r.goal_satisfied);
  CHECK(testing::angle(t, r.final_state, 2, "xy-axes") == 20.0);
  CHECK(r.trace.size() == 2);

  Plan twice;
  twice.actions = {{0.0, "start-increase", {"L1", "L2", "xy-axes"}},
                   {1.0, "start-increase", {"L1", "L2", "xy-axes"}}};
  r = validate_plan(t, twice, 1.0);
  CHECK_FALSE(r.valid);
  REQUIRE(r.failure);
  CHECK(r.failure->time == 1.0);
  CHECK(r.failure->violated == "(not (in-use))");

  Plan unknown;
  unknown.actions = {{0.0, "fly", {"L1"}}};
  r = validate_plan(t, unknown, 1.0);
  CHECK_FALSE(r.valid);
  CHECK(r.failure->violated == "unknown action");

  Plan short_plan;
  short_plan.actions = {{0.0, "start-increase", {"L1", "L2", "xy-axes"}}};
  r = validate_plan(t, short_plan, 1.0);
  CHECK_FALSE(r.valid);
  CHECK_FALSE(r.goal_satisfied);

  Plan off_grid;
  off_grid.actions = {{0.5, "start-increase", {"L1", "L2", "xy-axes"}}};
  CHECK_THROWS_AS(validate_plan(t, off_grid, 1.0), ValidationError);
  CHECK_NOTHROW(validate_plan(t, off_grid, 0.5));
  CHECK_THROWS_AS(validate_plan(t, good, 0.0), ValidationError);
}

TEST_CASE("validator accepts empty plan when init satisfies the goal") {
  auto task = testing::reference_task();
  task.goal = {{4, Plane::Z, pddl::Comparator::Less, 5.5}};
  auto l = testing::load(task, GravityFormulation::ucm(0.5));
  auto r = validate_plan(l->grounded, Plan{}, 1.0);
  CHECK(r.valid);
  CHECK(r.makespan == 0.0);
}

TEST_CASE("validator records triggered events in order") {
  auto task = testing::reference_task();
  task.goal = {};
  auto l = testing::load(task, GravityFormulation::ng());
  const auto& t = l->grounded;
  Plan p;
  p.actions = {{0.0, "start-decrease", {"L1", "L2", "z-axis"}},
               {1.0, "stop-decrease", {"L1", "L2", "z-axis"}}};
  auto r = validate_plan(t, p, 1.0);
  CHECK(r.valid);
  std::vector<std::string> events;
  for (const auto& e : r.trace)
    if (e.is_event) events.push_back(e.label());
  CHECK(events == std::vector<std::string>{"(back-to-360 L2 z-axis)", "(back-to-360 L3 z-axis)",
                                           "(back-to-360 L4 z-axis)"});
  CHECK(testing::angle(t, r.final_state, 3, "z-axis") == 359.0);
  auto j = report_to_json(t, r);
  CHECK(j["verdict"] == "valid");
  CHECK(format_report(r).find("valid") != std::string::npos);
}
