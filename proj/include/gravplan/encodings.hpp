#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "gravplan/model.hpp"
#include "gravplan/pddl/ast.hpp"

namespace gravplan {

/// NG, UCM(speed_g) or UACM(accel_g).
struct GravityFormulation {
  enum class Kind { NG, UCM, UACM };
  Kind kind = Kind::NG;
  double value = 0.0;  // speed_g for UCM, accel_g for UACM

  static GravityFormulation ng() { return {Kind::NG, 0.0}; }
  static GravityFormulation ucm(double speed_g) { return {Kind::UCM, speed_g}; }
  static GravityFormulation uacm(double accel_g) { return {Kind::UACM, accel_g}; }

  /// `NG`, `UCM0.5`, `UACM0.1`: one decimal is always kept.
  std::string label() const;
  /// Inverse of label(); throws std::invalid_argument.
  static GravityFormulation parse(const std::string& label);

  bool operator==(const GravityFormulation&) const = default;
};

/// The six formulations of the benchmark design.
std::vector<GravityFormulation> benchmark_formulations();

struct GoalConstraint {
  LinkIndex link = 2;
  Plane plane = Plane::XY;
  pddl::Comparator op = pddl::Comparator::Greater;
  double threshold = 0.0;
  bool operator==(const GoalConstraint&) const = default;
};

struct Task {
  ArticulatedObject object = ArticulatedObject::chain(2);
  Configuration initial;
  std::vector<GoalConstraint> goal;
  RateParams rates;
};

class EncodingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EncodingOptions {
  /// Also allow holding the higher-index link and moving the lower one.
  bool both_directions = false;
};

std::string domain_name(const GravityFormulation& f);

std::string encode_domain_text(const GravityFormulation& f, const EncodingOptions& opts = {});
pddl::DomainModel encode_domain(const GravityFormulation& f, const EncodingOptions& opts = {});

/// Throws EncodingError on goals over link 1, thresholds outside (0, 360) or
/// an initial configuration of the wrong size.
std::string encode_problem_text(const Task& t, const GravityFormulation& f,
                                const std::string& problem_name = "task",
                                const EncodingOptions& opts = {});
pddl::ProblemModel encode_problem(const Task& t, const GravityFormulation& f,
                                  const std::string& problem_name = "task",
                                  const EncodingOptions& opts = {});

}  // namespace gravplan
