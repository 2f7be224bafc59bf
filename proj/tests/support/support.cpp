#include "support.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gravplan/generator.hpp"
#include "gravplan/model.hpp"
#include "gravplan/pddl/parser.hpp"

namespace testing {

using namespace gravplan;

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(GRAVPLAN_TEST_DATA) + "/" + name);
  if (!in) throw std::runtime_error("missing test data " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::unique_ptr<Loaded> load(const Task& t, const GravityFormulation& f) {
  auto out = std::make_unique<Loaded>();
  out->task = t;
  out->formulation = f;
  out->domain = encode_domain(f);
  out->problem = encode_problem(t, f);
  out->grounded = ground(out->domain, out->problem);
  return out;
}

std::unique_ptr<Loaded> load_generated(std::size_t size, std::uint64_t seed,
                                       const GravityFormulation& f) {
  GenSpec spec;
  spec.size = size;
  spec.seed = seed;
  if (f.kind == GravityFormulation::Kind::UCM) spec.rates.speed_g = f.value;
  if (f.kind == GravityFormulation::Kind::UACM) spec.rates.accel_g = f.value;
  return load(generate_task(spec), f);
}

std::unique_ptr<Loaded> load_corpus_task(std::size_t size, std::size_t index,
                                         const GravityFormulation& f) {
  SuiteSpec suite;
  GenSpec spec;
  spec.size = size;
  spec.seed = task_seed(suite.seed, size, index);
  spec.grid = suite.grid;
  spec.sigma = suite.sigma;
  spec.goal_offset = suite.goal_offset;
  return load(generate_task(spec), f);
}

Task reference_task() {
  Task t;
  t.object = ArticulatedObject::chain(4);
  t.initial = t.object.configuration();
  using pddl::Comparator;
  t.goal = {{2, Plane::XY, Comparator::Greater, 265.4}, {2, Plane::Z, Comparator::Greater, 85.5},
            {3, Plane::XY, Comparator::Greater, 246.8}, {3, Plane::Z, Comparator::Greater, 65.0},
            {4, Plane::XY, Comparator::Less, 33.4},     {4, Plane::Z, Comparator::Less, 5.5}};
  t.rates.speed_g = 0.5;
  return t;
}

std::uint32_t fluent(const GroundedTask& t, const std::string& label) {
  auto i = t.find_fluent(label);
  if (!i) throw std::runtime_error("no fluent " + label);
  return *i;
}

std::uint32_t atom(const GroundedTask& t, const std::string& label) {
  auto i = t.find_atom(label);
  if (!i) throw std::runtime_error("no atom " + label);
  return *i;
}

std::uint32_t action(const GroundedTask& t, const std::string& label) {
  for (std::uint32_t i = 0; i < t.actions.size(); ++i)
    if (t.actions[i].label() == label) return i;
  throw std::runtime_error("no action " + label);
}

double angle(const GroundedTask& t, const HybridState& s, std::size_t link,
             const std::string& plane) {
  return s.numeric[fluent(t, "(angle " + link_name(link) + " " + plane + ")")];
}

void randomize_angles(const GroundedTask& t, HybridState& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 360.0);
  for (std::uint32_t i = 0; i < t.fluent_names.size(); ++i)
    if (t.fluent_names[i].rfind("(angle ", 0) == 0) s.numeric[i] = u(rng);
}

}  // namespace testing
