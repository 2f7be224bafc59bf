#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "gravplan/encodings.hpp"
#include "gravplan/pddl/grounder.hpp"
#include "gravplan/state.hpp"

namespace testing {

std::string read_data(const std::string& name);

/// Parsed domain/problem kept alive next to their grounding.
struct Loaded {
  gravplan::Task task;
  gravplan::GravityFormulation formulation;
  gravplan::pddl::DomainModel domain;
  gravplan::pddl::ProblemModel problem;
  gravplan::GroundedTask grounded;
};

std::unique_ptr<Loaded> load(const gravplan::Task& t, const gravplan::GravityFormulation& f);
std::unique_ptr<Loaded> load_generated(std::size_t size, std::uint64_t seed,
                                       const gravplan::GravityFormulation& f);

/// Task `index` (1-based) of the given size in the default benchmark corpus.
std::unique_ptr<Loaded> load_corpus_task(std::size_t size, std::size_t index,
                                         const gravplan::GravityFormulation& f);

/// Four links at zero with six single-sided goal comparisons on links 2-4.
gravplan::Task reference_task();

std::uint32_t fluent(const gravplan::GroundedTask& t, const std::string& label);
std::uint32_t atom(const gravplan::GroundedTask& t, const std::string& label);
std::uint32_t action(const gravplan::GroundedTask& t, const std::string& label);
double angle(const gravplan::GroundedTask& t, const gravplan::HybridState& s, std::size_t link,
             const std::string& plane);

/// Angles of every link drawn uniformly from [0, 360) on both planes.
void randomize_angles(const gravplan::GroundedTask& t, gravplan::HybridState& s,
                      std::mt19937_64& rng);

}  // namespace testing
