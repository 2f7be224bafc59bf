#include "gravplan/bench.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "gravplan/encodings.hpp"
#include "gravplan/pddl/parser.hpp"
#include "gravplan/validator.hpp"

namespace gravplan {

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw BenchError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

RunResult run_model(const nlohmann::json& model, const std::filesystem::path& base,
                    const PlannerConfig& cfg) {
  RunResult r;
  r.model_id = model.value("id", "");
  r.formulation = model.value("formulation", "");
  r.size = model.value("size", std::size_t{0});
  r.task = model.value("task", std::size_t{0});
  r.cutoff = cfg.cutoff;
  r.delta = cfg.delta;
  try {
    double t0 = thread_cpu_seconds();
    std::string dtext = read_file(base / model.at("domain").get<std::string>());
    std::string ptext = read_file(base / model.at("problem").get<std::string>());
    pddl::DomainModel d = pddl::parse_domain(dtext);
    pddl::ProblemModel p = pddl::parse_problem(ptext, &d);
    GroundedTask task = ground(d, p);
    r.load_time = thread_cpu_seconds() - t0;

    PlanResult pr = plan(task, cfg);
    r.runtime = pr.runtime;
    r.expanded = pr.expanded;
    r.generated = pr.generated;
    r.solved = pr.solved;
    if (pr.solved) {
      r.makespan = pr.plan.makespan();
      r.plan = format_plan(pr.plan);
      r.validation = validate_plan(task, pr.plan, cfg.delta).valid ? "valid" : "invalid";
    } else {
      r.reason = reason_name(pr.reason);
    }
  } catch (const std::exception& e) {
    r.solved = false;
    r.reason = "error";
    r.error = e.what();
    r.validation = "n/a";
  }
  return r;
}

std::vector<RunResult> run_suite(const nlohmann::json& manifest, const std::filesystem::path& base,
                                 const BenchConfig& cfg) {
  const auto& models = manifest.at("models");
  const std::size_t n = models.size();
  std::vector<RunResult> results(n);
  if (n == 0) return results;
  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, n));

  struct Slot {
    std::atomic<bool> cancel{false};
    std::atomic<std::int64_t> started{0};  // steady-clock ns, 0 when idle
  };
  std::vector<Slot> slots(workers);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> done{false};
  auto now_ns = [] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
  };
  const auto limit_ns = static_cast<std::int64_t>(
      (cfg.planner.cutoff * cfg.watchdog_factor * static_cast<double>(workers) + 5.0) * 1e9);

  std::thread watchdog([&] {
    while (!done.load()) {
      std::int64_t t = now_ns();
      for (auto& s : slots) {
        std::int64_t st = s.started.load();
        if (st != 0 && t - st > limit_ns) s.cancel.store(true);
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  });

  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      Slot& slot = slots[w];
      PlannerConfig pc = cfg.planner;
      pc.cancel = &slot.cancel;
      for (std::size_t i = next++; i < n; i = next++) {
        slot.cancel.store(false);
        slot.started.store(now_ns());
        results[i] = run_model(models[i], base, pc);
        slot.started.store(0);
      }
    });
  }
  for (auto& t : pool) t.join();
  done.store(true);
  watchdog.join();
  return results;
}

double par10(const std::vector<RunResult>& cell, double cutoff) {
  if (cell.empty()) throw BenchError("PAR10 of an empty cell");
  double total = 0.0;
  for (const auto& r : cell) total += r.solved ? r.runtime : 10.0 * cutoff;
  return total / static_cast<double>(cell.size());
}

std::string render_cell(const CellStats& c) {
  if (c.solved == 0 || !c.mean_runtime) return fmt::format("-- ({:.0f})", c.coverage);
  return fmt::format("{:.1f} ({:.0f})", *c.mean_runtime, c.coverage);
}

bool formulation_before(const std::string& a, const std::string& b) {
  auto rank = [](const std::string& s) -> std::pair<int, double> {
    try {
      auto f = GravityFormulation::parse(s);
      return {static_cast<int>(f.kind), f.value};
    } catch (const std::exception&) {
      return {3, 0.0};
    }
  };
  auto ra = rank(a), rb = rank(b);
  if (ra != rb) return ra < rb;
  return a < b;
}

const CellStats* SuiteReport::cell(const std::string& formulation, std::size_t size) const {
  for (const auto& c : cells)
    if (c.formulation == formulation && c.size == size) return &c;
  return nullptr;
}

SuiteReport aggregate_table(const std::vector<RunResult>& results) {
  SuiteReport rep;
  std::map<std::pair<std::string, std::size_t>, std::vector<RunResult>> groups;
  for (const auto& r : results) {
    groups[{r.formulation, r.size}].push_back(r);
    if (std::find(rep.formulations.begin(), rep.formulations.end(), r.formulation) ==
        rep.formulations.end())
      rep.formulations.push_back(r.formulation);
    if (std::find(rep.sizes.begin(), rep.sizes.end(), r.size) == rep.sizes.end())
      rep.sizes.push_back(r.size);
    rep.cutoff = std::max(rep.cutoff, r.cutoff);
  }
  std::sort(rep.formulations.begin(), rep.formulations.end(), formulation_before);
  std::sort(rep.sizes.begin(), rep.sizes.end());
  for (const auto& f : rep.formulations) {
    for (std::size_t size : rep.sizes) {
      auto it = groups.find({f, size});
      if (it == groups.end()) continue;
      const auto& cell = it->second;
      CellStats c;
      c.formulation = f;
      c.size = size;
      c.instances = cell.size();
      double sum = 0.0, cutoff = 0.0;
      std::vector<double> expanded;
      for (const auto& r : cell) {
        cutoff = std::max(cutoff, r.cutoff);
        expanded.push_back(static_cast<double>(r.expanded));
        if (r.solved) {
          ++c.solved;
          sum += r.runtime;
          if (r.validation == "valid") ++c.valid;
        }
      }
      c.coverage = 100.0 * static_cast<double>(c.solved) / static_cast<double>(c.instances);
      if (c.solved) c.mean_runtime = sum / static_cast<double>(c.solved);
      c.par10 = par10(cell, cutoff);
      c.median_expanded = median(expanded);
      rep.total_instances += c.instances;
      rep.total_solved += c.solved;
      rep.cells.push_back(c);
    }
  }
  return rep;
}

std::string report_table(const SuiteReport& r) {
  std::string out = fmt::format("{:<10}", "model");
  for (std::size_t s : r.sizes) out += fmt::format(" {:>14}", s);
  out += "\n";
  for (const auto& f : r.formulations) {
    out += fmt::format("{:<10}", f);
    for (std::size_t s : r.sizes) {
      const CellStats* c = r.cell(f, s);
      out += fmt::format(" {:>14}", c ? render_cell(*c) : "");
    }
    out += "\n";
  }
  out += fmt::format("solved {}/{} (cutoff {} s)\n", r.total_solved, r.total_instances, r.cutoff);
  return out;
}

std::string report_csv(const SuiteReport& r) {
  std::string out = "model";
  for (std::size_t s : r.sizes) out += fmt::format(",{}", s);
  out += "\n";
  for (const auto& f : r.formulations) {
    out += f;
    for (std::size_t s : r.sizes) {
      const CellStats* c = r.cell(f, s);
      out += "," + (c ? render_cell(*c) : std::string());
    }
    out += "\n";
  }
  return out;
}

std::string par10_csv(const SuiteReport& r) {
  std::string out = "size";
  for (const auto& f : r.formulations) out += "," + f;
  out += "\n";
  for (std::size_t s : r.sizes) {
    out += std::to_string(s);
    for (const auto& f : r.formulations) {
      const CellStats* c = r.cell(f, s);
      out += c ? fmt::format(",{:.3f}", c->par10) : std::string(",");
    }
    out += "\n";
  }
  return out;
}

nlohmann::json report_json(const SuiteReport& r) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : r.cells)
    cells.push_back({{"formulation", c.formulation},
                     {"size", c.size},
                     {"instances", c.instances},
                     {"solved", c.solved},
                     {"valid", c.valid},
                     {"coverage", c.coverage},
                     {"mean_runtime", c.mean_runtime ? nlohmann::json(*c.mean_runtime) : nullptr},
                     {"par10", c.par10},
                     {"median_expanded", c.median_expanded},
                     {"cell", render_cell(c)}});
  TrendCheck trend = difficulty_trend(r);
  return {{"formulations", r.formulations},
          {"sizes", r.sizes},
          {"cells", cells},
          {"total_instances", r.total_instances},
          {"total_solved", r.total_solved},
          {"cutoff", r.cutoff},
          {"difficulty_trend",
           {{"pairs", trend.pairs},
            {"nondecreasing", trend.nondecreasing},
            {"fraction", trend.fraction},
            {"passed", trend.passed}}},
          {"metadata", r.metadata.is_null() ? nlohmann::json::object() : r.metadata}};
}

TrendCheck difficulty_trend(const SuiteReport& r, double threshold) {
  TrendCheck t;
  for (const auto& f : r.formulations) {
    const CellStats* prev = nullptr;
    for (std::size_t s : r.sizes) {
      const CellStats* c = r.cell(f, s);
      if (!c) continue;
      if (prev) {
        ++t.pairs;
        if (c->median_expanded >= prev->median_expanded)
          ++t.nondecreasing;
        else
          t.notes.push_back(fmt::format("{}: median expanded drops from {} (size {}) to {} (size {})",
                                        f, prev->median_expanded, prev->size, c->median_expanded,
                                        c->size));
      }
      prev = c;
    }
  }
  t.fraction = t.pairs ? static_cast<double>(t.nondecreasing) / static_cast<double>(t.pairs) : 1.0;
  t.passed = t.fraction >= threshold;
  return t;
}

nlohmann::json result_to_json(const RunResult& r) {
  return {{"model", r.model_id},
          {"formulation", r.formulation},
          {"size", r.size},
          {"task", r.task},
          {"solved", r.solved},
          {"reason", r.reason},
          {"error", r.error},
          {"runtime", r.runtime},
          {"load_time", r.load_time},
          {"cutoff", r.cutoff},
          {"delta", r.delta},
          {"expanded", r.expanded},
          {"generated", r.generated},
          {"makespan", r.makespan ? nlohmann::json(*r.makespan) : nullptr},
          {"validation", r.validation},
          {"plan", r.plan}};
}

RunResult result_from_json(const nlohmann::json& j) {
  RunResult r;
  r.model_id = j.at("model").get<std::string>();
  r.formulation = j.at("formulation").get<std::string>();
  r.size = j.at("size").get<std::size_t>();
  r.task = j.value("task", std::size_t{0});
  r.solved = j.at("solved").get<bool>();
  r.reason = j.value("reason", "");
  r.error = j.value("error", "");
  r.runtime = j.at("runtime").get<double>();
  r.load_time = j.value("load_time", 0.0);
  r.cutoff = j.at("cutoff").get<double>();
  r.delta = j.value("delta", 1.0);
  r.expanded = j.value("expanded", std::size_t{0});
  r.generated = j.value("generated", std::size_t{0});
  if (j.contains("makespan") && !j.at("makespan").is_null())
    r.makespan = j.at("makespan").get<double>();
  r.validation = j.value("validation", "n/a");
  r.plan = j.value("plan", "");
  return r;
}

nlohmann::json results_to_json(const std::vector<RunResult>& rs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rs) out.push_back(result_to_json(r));
  return out;
}

std::vector<RunResult> results_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw BenchError("results must be a JSON array");
  std::vector<RunResult> out;
  for (const auto& e : j) out.push_back(result_from_json(e));
  return out;
}

}  // namespace gravplan
