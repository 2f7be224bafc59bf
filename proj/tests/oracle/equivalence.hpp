#pragma once

#include <cstdint>
#include <string>

#include "gravplan/encodings.hpp"

namespace oracle {

struct EquivalenceStats {
  std::size_t traces = 0;
  std::size_t steps = 0;
  std::size_t comparisons = 0;
  std::size_t mismatches = 0;
  double max_error = 0.0;
  std::string first_mismatch;
};

/// Random traces on generated tasks: random angles, random happenings, and
/// `steps` advance steps, each compared between the engine and NaiveStepper.
EquivalenceStats compare_traces(const gravplan::GravityFormulation& f, std::size_t traces,
                                std::size_t steps, std::uint64_t seed, double tolerance = 1e-9);

}  // namespace oracle
