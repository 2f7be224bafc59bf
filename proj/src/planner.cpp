#include "gravplan/planner.hpp"

#include <time.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "gravplan/model.hpp"
#include "gravplan/semantics.hpp"

namespace gravplan {

std::string heuristic_name(HeuristicKind h) {
  switch (h) {
    case HeuristicKind::Blind: return "blind";
    case HeuristicKind::UnsatCount: return "unsat-count";
    case HeuristicKind::AngularRate: return "angular-rate";
  }
  return "angular-rate";
}

HeuristicKind parse_heuristic(const std::string& s) {
  if (s == "blind") return HeuristicKind::Blind;
  if (s == "unsat-count") return HeuristicKind::UnsatCount;
  if (s == "angular-rate") return HeuristicKind::AngularRate;
  throw std::invalid_argument("unknown heuristic '" + s + "'");
}

std::string search_name(SearchKind s) {
  return s == SearchKind::GreedyBestFirst ? "greedy-best-first" : "weighted-astar";
}

SearchKind parse_search(const std::string& s) {
  if (s == "greedy-best-first" || s == "gbfs") return SearchKind::GreedyBestFirst;
  if (s == "weighted-astar" || s == "wastar") return SearchKind::WeightedAStar;
  throw std::invalid_argument("unknown search '" + s + "'");
}

std::string reason_name(UnsolvedReason r) {
  switch (r) {
    case UnsolvedReason::Timeout: return "timeout";
    case UnsolvedReason::Memory: return "memory";
    case UnsolvedReason::Exhausted: return "exhausted";
  }
  return "exhausted";
}

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

namespace {

constexpr double kTinyEstimate = 1e-9;

/// Rotation needed to bring `v` into the region `v op t` when crossing 360
/// or 0 wraps around (0 -> 359 on the way down, 360 -> 0 on the way up).
double region_distance(pddl::Comparator op, double v, double t) {
  using pddl::Comparator;
  v = normalize_degrees(v);
  switch (op) {
    case Comparator::Greater:
    case Comparator::GreaterEq:
      return t < 359.0 ? std::min(t - v, v) : t - v;
    case Comparator::Less:
    case Comparator::LessEq:
      return t > 0.0 ? std::min(v - t, 360.0 - v) : v - t;
    case Comparator::Equal: return angular_gap(v, normalize_degrees(t));
  }
  return 0.0;
}

/// Goal comparisons with the data needed to estimate their distance.
class GoalEstimator {
 public:
  explicit GoalEstimator(const GroundedTask& task) : task_(task) {
    double rate = 0.0;
    for (const char* f : {"(speed-i)", "(speed-d)"})
      if (auto v = task.init_value(f); v && std::isfinite(*v)) rate = std::max(rate, *v);
    rate_ = rate > 0 ? rate : 1.0;
    for (const auto& c : task.goal.comparisons) {
      bool angle = false;
      for (std::uint32_t f : c.lhs.reads())
        if (task.fluent_names[f].rfind("(angle ", 0) == 0) angle = true;
      for (std::uint32_t f : c.rhs.reads())
        if (task.fluent_names[f].rfind("(angle ", 0) == 0) angle = true;
      angle_.push_back(angle);
    }
  }

  /// {max, sum} of per-conjunct estimates in seconds; {0, 0} iff satisfied.
  std::pair<double, double> angular_rate(const HybridState& s) const {
    const GroundCondition& g = task_.goal;
    double hmax = 0.0, hsum = 0.0;
    bool unsatisfied = false;
    for (std::uint32_t a : g.positive)
      if (!s.atoms.test(a)) unsatisfied = true;
    for (std::uint32_t a : g.negative)
      if (s.atoms.test(a)) unsatisfied = true;
    for (std::size_t i = 0; i < g.comparisons.size(); ++i) {
      const auto& c = g.comparisons[i];
      double l = c.lhs.eval(s.numeric), r = c.rhs.eval(s.numeric);
      if (compare(c.op, l, r, kComparisonTolerance)) continue;
      unsatisfied = true;
      double gap = angle_[i] ? angular_gap(normalize_degrees(l), normalize_degrees(r))
                             : std::fabs(l - r);
      hmax = std::max(hmax, gap / rate_);
      hsum += (angle_[i] ? region_distance(c.op, l, r) : gap) / rate_;
    }
    if (unsatisfied && hmax <= 0.0) hmax = kTinyEstimate;
    if (unsatisfied && hsum <= 0.0) hsum = kTinyEstimate;
    return {hmax, hsum};
  }

  std::pair<double, double> evaluate(const HybridState& s, HeuristicKind kind) const {
    switch (kind) {
      case HeuristicKind::AngularRate: return angular_rate(s);
      case HeuristicKind::UnsatCount: {
        double n = 0;
        const GroundCondition& g = task_.goal;
        for (std::uint32_t a : g.positive) n += !s.atoms.test(a);
        for (std::uint32_t a : g.negative) n += s.atoms.test(a);
        for (const auto& c : g.comparisons)
          n += !compare(c.op, c.lhs.eval(s.numeric), c.rhs.eval(s.numeric), kComparisonTolerance);
        return {n, n};
      }
      case HeuristicKind::Blind: {
        double h = goal_satisfied(task_, s) ? 0.0 : 1.0;
        return {h, h};
      }
    }
    return {0.0, 0.0};
  }

  /// Unsatisfied goal comparison indices whose fluents are angle-like or not.
  std::vector<std::uint32_t> unsatisfied_fluents(const HybridState& s, bool& atom_goal_open) const {
    std::vector<std::uint32_t> out;
    const GroundCondition& g = task_.goal;
    atom_goal_open = false;
    for (std::uint32_t a : g.positive)
      if (!s.atoms.test(a)) atom_goal_open = true;
    for (std::uint32_t a : g.negative)
      if (s.atoms.test(a)) atom_goal_open = true;
    for (const auto& c : g.comparisons) {
      if (compare(c.op, c.lhs.eval(s.numeric), c.rhs.eval(s.numeric), kComparisonTolerance))
        continue;
      for (std::uint32_t f : c.lhs.reads()) out.push_back(f);
      for (std::uint32_t f : c.rhs.reads()) out.push_back(f);
    }
    return out;
  }

 private:
  const GroundedTask& task_;
  double rate_ = 1.0;
  std::vector<bool> angle_;
};

/// For each `start-*` action: fluents changed by the processes it switches on.
std::vector<std::vector<std::uint32_t>> touched_fluents(const GroundedTask& task) {
  std::vector<std::vector<std::uint32_t>> out(task.actions.size());
  for (std::size_t i = 0; i < task.actions.size(); ++i) {
    const GroundSchema& a = task.actions[i];
    if (a.name.rfind("start-", 0) != 0) continue;
    std::vector<std::uint32_t> fl;
    for (const GroundSchema& p : task.processes) {
      bool enabled = false;
      for (std::uint32_t atom : p.pre.positive)
        if (std::find(a.eff.add.begin(), a.eff.add.end(), atom) != a.eff.add.end()) enabled = true;
      if (!enabled) continue;
      for (const auto& ne : p.eff.numeric) fl.push_back(ne.fluent);
    }
    std::sort(fl.begin(), fl.end());
    fl.erase(std::unique(fl.begin(), fl.end()), fl.end());
    out[i] = std::move(fl);
  }
  return out;
}

struct NodeMeta {
  std::int64_t parent;
  std::int32_t happening;
  std::int64_t steps;
  double h;
  double hsum;
  std::uint64_t hash;
};

/// Flat storage of every generated state.
class NodeArena {
 public:
  NodeArena(std::size_t nf, std::size_t nw, double rounding)
      : nf_(nf), nw_(nw), inv_rounding_(1.0 / rounding) {}

  std::uint32_t push(const HybridState& s, const NodeMeta& m) {
    std::uint32_t id = static_cast<std::uint32_t>(meta_.size());
    nums_.insert(nums_.end(), s.numeric.begin(), s.numeric.end());
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::uint64_t v) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    for (double v : s.numeric) {
      std::int64_t k = std::isfinite(v) ? std::llround(v * inv_rounding_)
                                        : std::numeric_limits<std::int64_t>::min();
      keys_.push_back(k);
      mix(static_cast<std::uint64_t>(k));
    }
    for (std::uint64_t w : s.atoms.words()) {
      words_.push_back(w);
      mix(w);
    }
    meta_.push_back(m);
    meta_.back().hash = h;
    return id;
  }

  void pop() {
    meta_.pop_back();
    nums_.resize(nums_.size() - nf_);
    keys_.resize(keys_.size() - nf_);
    words_.resize(words_.size() - nw_);
  }

  void load(std::uint32_t id, HybridState& s, double delta) const {
    s.numeric.assign(nums_.begin() + id * nf_, nums_.begin() + (id + 1) * nf_);
    std::copy(words_.begin() + id * nw_, words_.begin() + (id + 1) * nw_, s.atoms.words().begin());
    s.time = static_cast<double>(meta_[id].steps) * delta;
  }

  bool same(std::uint32_t a, std::uint32_t b) const {
    return std::equal(keys_.begin() + a * nf_, keys_.begin() + (a + 1) * nf_,
                      keys_.begin() + b * nf_) &&
           std::equal(words_.begin() + a * nw_, words_.begin() + (a + 1) * nw_,
                      words_.begin() + b * nw_);
  }

  const NodeMeta& meta(std::uint32_t id) const { return meta_[id]; }
  std::size_t size() const { return meta_.size(); }
  std::size_t bytes_per_node() const { return nf_ * 16 + nw_ * 8 + sizeof(NodeMeta) + 48; }

 private:
  std::size_t nf_, nw_;
  double inv_rounding_;
  std::vector<double> nums_;
  std::vector<std::int64_t> keys_;
  std::vector<std::uint64_t> words_;
  std::vector<NodeMeta> meta_;
};

struct OpenEntry {
  double k1, k2, k3;
  std::uint32_t id;
};

struct OpenOrder {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.k1 != b.k1) return a.k1 > b.k1;
    if (a.k2 != b.k2) return a.k2 > b.k2;
    if (a.k3 != b.k3) return a.k3 > b.k3;
    return a.id < b.id;  // newest first
  }
};

/// Round-robin over three frontiers: best max estimate, best wrap-aware sum
/// estimate, and type-based exploration (a uniformly drawn node from a
/// uniformly drawn (sum estimate, time) bucket, fixed seed).
class Frontier {
 public:
  Frontier(SearchKind search, double weight, bool exploration)
      : search_(search), weight_(weight), exploration_(exploration), rng_(0x5eedULL) {}

  void push(std::uint32_t id, double h, double hsum, std::int64_t steps, double g) {
    if (search_ == SearchKind::GreedyBestFirst) {
      by_max_.push({h, hsum, g, id});
      by_sum_.push({hsum, h, g, id});
    } else {
      by_max_.push({g + weight_ * h, h, hsum, id});
      by_sum_.push({g + weight_ * hsum, hsum, h, id});
    }
    if (closed_.size() <= id) closed_.resize(id + 1, false);
    if (!exploration_) return;
    std::uint64_t key = (static_cast<std::uint64_t>(std::llround(hsum * 10.0)) << 32) ^
                        static_cast<std::uint64_t>(steps);
    auto [it, fresh] = type_slot_.try_emplace(key, buckets_.size());
    if (fresh) buckets_.emplace_back();
    auto& b = buckets_[it->second];
    if (b.empty()) live_.push_back(it->second);
    b.push_back(id);
  }

  /// Next unexpanded node, or nullopt when every frontier is empty.
  std::optional<std::uint32_t> pop() {
    for (;;) {
      if (by_max_.empty() && by_sum_.empty() && live_.empty()) return std::nullopt;
      std::size_t phase = turn_++ % (exploration_ ? 3 : 2);
      std::optional<std::uint32_t> id;
      if (phase == 2)
        id = pop_type();
      else
        id = pop_queue(phase == 0 ? by_max_ : by_sum_);
      if (!id || closed_[*id]) continue;
      closed_[*id] = true;
      return id;
    }
  }

 private:
  using Queue = std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder>;

  static std::optional<std::uint32_t> pop_queue(Queue& q) {
    if (q.empty()) return std::nullopt;
    std::uint32_t id = q.top().id;
    q.pop();
    return id;
  }

  std::optional<std::uint32_t> pop_type() {
    if (live_.empty()) return std::nullopt;
    std::size_t li = std::uniform_int_distribution<std::size_t>(0, live_.size() - 1)(rng_);
    auto& b = buckets_[live_[li]];
    std::size_t bi = std::uniform_int_distribution<std::size_t>(0, b.size() - 1)(rng_);
    std::uint32_t id = b[bi];
    b[bi] = b.back();
    b.pop_back();
    if (b.empty()) {
      live_[li] = live_.back();
      live_.pop_back();
    }
    return id;
  }

  SearchKind search_;
  double weight_;
  bool exploration_;
  Queue by_max_, by_sum_;
  std::vector<bool> closed_;
  std::unordered_map<std::uint64_t, std::size_t> type_slot_;
  std::vector<std::vector<std::uint32_t>> buckets_;
  std::vector<std::size_t> live_;
  std::mt19937_64 rng_;
  std::size_t turn_ = 0;
};

void check_task(const GroundedTask& task, const PlannerConfig& cfg) {
  if (!(cfg.delta > 0)) throw PlannerError("delta must be positive");
  if (!(cfg.cutoff > 0)) throw PlannerError("cutoff must be positive");
  if (!(cfg.weight >= 1)) throw PlannerError("weight must be at least 1");
  if (!(cfg.dedup_rounding > 0)) throw PlannerError("dedup rounding must be positive");
  auto check_reads = [&](const NumExpr& e, const std::string& where) {
    for (std::uint32_t f : e.reads())
      if (std::isnan(task.init.numeric[f]))
        throw PlannerError("fluent " + task.fluent_names[f] + " read by " + where +
                           " has no initial value");
  };
  for (const auto& c : task.goal.comparisons) {
    check_reads(c.lhs, "the goal");
    check_reads(c.rhs, "the goal");
  }
  for (const auto& p : task.processes)
    for (const auto& ne : p.eff.numeric) check_reads(ne.value, p.label());
}

}  // namespace

std::vector<std::pair<std::int32_t, HybridState>> successors(const GroundedTask& task,
                                                             const HybridState& s, double delta) {
  std::vector<std::pair<std::int32_t, HybridState>> out;
  for (std::uint32_t a = 0; a < task.actions.size(); ++a) {
    if (!applicable(task, s, a)) continue;
    HybridState next = s;
    apply_action_in_place(task, next, a);
    stabilize(task, next);
    out.emplace_back(static_cast<std::int32_t>(a), std::move(next));
  }
  out.emplace_back(kWait, advance(task, s, delta).state);
  return out;
}

double heuristic_angular_rate(const GroundedTask& task, const HybridState& s) {
  return GoalEstimator(task).angular_rate(s).first;
}

double evaluate_heuristic(const GroundedTask& task, const HybridState& s, HeuristicKind kind) {
  return GoalEstimator(task).evaluate(s, kind).first;
}

PlanResult plan(const GroundedTask& task, const PlannerConfig& cfg) {
  check_task(task, cfg);
  const double start = thread_cpu_seconds();
  PlanResult result;
  GoalEstimator estimator(task);
  auto touched = touched_fluents(task);

  HybridState cur = task.init;
  stabilize(task, cur);
  cur.time = 0.0;

  NodeArena arena(cur.numeric.size(), cur.atoms.words().size(), cfg.dedup_rounding);
  const std::size_t max_nodes = std::max<std::size_t>(1, cfg.memory_cap / arena.bytes_per_node());

  auto hash = [&](std::uint32_t id) { return arena.meta(id).hash; };
  auto eq = [&](std::uint32_t a, std::uint32_t b) { return arena.same(a, b); };
  std::unordered_set<std::uint32_t, decltype(hash), decltype(eq)> seen(1024, hash, eq);
  Frontier frontier(cfg.search, cfg.weight, cfg.type_exploration);

  auto stop = [&](std::optional<UnsolvedReason> reason) {
    if (reason) result.reason = *reason;
    result.runtime = thread_cpu_seconds() - start;
    return result;
  };

  auto finish_solved = [&](std::uint32_t goal) {
    std::vector<std::uint32_t> path;
    for (std::int64_t n = goal; n >= 0; n = arena.meta(static_cast<std::uint32_t>(n)).parent)
      path.push_back(static_cast<std::uint32_t>(n));
    std::reverse(path.begin(), path.end());
    for (std::size_t i = 1; i < path.size(); ++i) {
      const NodeMeta& m = arena.meta(path[i]);
      if (m.happening == kWait) continue;
      const GroundSchema& a = task.actions[static_cast<std::size_t>(m.happening)];
      result.plan.actions.push_back({static_cast<double>(m.steps) * cfg.delta, a.name, a.args});
    }
    result.plan.end_time = static_cast<double>(arena.meta(goal).steps) * cfg.delta;
    result.solved = true;
  };

  HybridState next = cur;
  // Returns true when the new node satisfies the goal.
  auto generate = [&](std::int64_t parent, std::int32_t happening, std::int64_t steps) {
    ++result.generated;
    auto [h, hs] = estimator.evaluate(next, cfg.heuristic);
    std::uint32_t id = arena.push(next, {parent, happening, steps, h, hs, 0});
    if (!seen.insert(id).second) {
      arena.pop();
      return false;
    }
    if (goal_satisfied(task, next)) {
      finish_solved(id);
      return true;
    }
    frontier.push(id, h, hs, steps, static_cast<double>(steps) * cfg.delta);
    return false;
  };

  next = cur;
  if (generate(-1, kWait, 0)) return stop(std::nullopt);

  std::vector<double> scratch;
  std::vector<std::uint32_t> open_fluents;
  while (auto popped = frontier.pop()) {
    if ((result.expanded & 31) == 0 &&
        (thread_cpu_seconds() - start > cfg.cutoff ||
         (cfg.cancel && cfg.cancel->load(std::memory_order_relaxed))))
      return stop(UnsolvedReason::Timeout);
    if (arena.size() >= max_nodes) return stop(UnsolvedReason::Memory);

    const std::uint32_t id = *popped;
    ++result.expanded;
    arena.load(id, cur, cfg.delta);
    const std::int64_t steps = arena.meta(id).steps;

    bool prune = cfg.helpful_actions;
    if (prune) {
      bool atom_goal_open = false;
      open_fluents = estimator.unsatisfied_fluents(cur, atom_goal_open);
      std::sort(open_fluents.begin(), open_fluents.end());
      prune = !atom_goal_open;
    }

    for (std::uint32_t a = 0; a < task.actions.size(); ++a) {
      if (!holds(task.actions[a].pre, cur, kComparisonTolerance)) continue;
      if (prune && task.actions[a].name.rfind("start-", 0) == 0 &&
          std::none_of(touched[a].begin(), touched[a].end(), [&](std::uint32_t f) {
            return std::binary_search(open_fluents.begin(), open_fluents.end(), f);
          }))
        continue;
      next = cur;
      apply_action_in_place(task, next, a);
      stabilize(task, next);
      if (generate(id, static_cast<std::int32_t>(a), steps)) return stop(std::nullopt);
    }
    next = cur;
    integrate_in_place(task, next, cfg.delta, scratch);
    stabilize(task, next);
    if (generate(id, kWait, steps + 1)) return stop(std::nullopt);
  }
  return stop(UnsolvedReason::Exhausted);
}

}  // namespace gravplan
