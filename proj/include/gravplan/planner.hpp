#pragma once

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gravplan/pddl/grounder.hpp"
#include "gravplan/plan.hpp"
#include "gravplan/state.hpp"

namespace gravplan {

enum class HeuristicKind { Blind, UnsatCount, AngularRate };
enum class SearchKind { GreedyBestFirst, WeightedAStar };
enum class UnsolvedReason { Timeout, Memory, Exhausted };

std::string heuristic_name(HeuristicKind h);
HeuristicKind parse_heuristic(const std::string& s);
std::string search_name(SearchKind s);
SearchKind parse_search(const std::string& s);
std::string reason_name(UnsolvedReason r);

struct PlannerConfig {
  double delta = 1.0;
  HeuristicKind heuristic = HeuristicKind::AngularRate;
  SearchKind search = SearchKind::GreedyBestFirst;
  double weight = 1.0;                              // weighted A* only
  double cutoff = 300.0;                            // CPU seconds
  std::size_t memory_cap = std::size_t{8} << 30;    // bytes
  double dedup_rounding = 1e-4;                     // degrees
  bool helpful_actions = true;
  /// Adds a type-based exploration frontier next to the greedy ones.
  bool type_exploration = true;
  /// Set by an external watchdog; the search stops with Timeout.
  const std::atomic<bool>* cancel = nullptr;
};

class PlannerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wait is encoded as kWait in place of an action index.
inline constexpr std::int32_t kWait = -1;

struct SearchNode {
  HybridState state;
  std::int64_t parent = -1;
  std::int32_t happening = kWait;
  double g = 0.0;
  double h = 0.0;
};

struct PlanResult {
  bool solved = false;
  Plan plan;
  UnsolvedReason reason = UnsolvedReason::Exhausted;
  double runtime = 0.0;  // CPU seconds spent searching
  std::size_t expanded = 0;
  std::size_t generated = 0;
};

/// Applicable actions (each followed by event stabilization, time unchanged)
/// plus one wait successor advance(s, delta). No duplicate filtering.
std::vector<std::pair<std::int32_t, HybridState>> successors(const GroundedTask& task,
                                                             const HybridState& s, double delta);

/// Max over unsatisfied goal comparisons of angular gap / max(speed-i, speed-d).
double heuristic_angular_rate(const GroundedTask& task, const HybridState& s);

double evaluate_heuristic(const GroundedTask& task, const HybridState& s, HeuristicKind kind);

/// Deterministic forward search from the (stabilized) initial state.
PlanResult plan(const GroundedTask& task, const PlannerConfig& cfg = {});

/// CPU time consumed by the calling thread.
double thread_cpu_seconds();

}  // namespace gravplan
