#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gravplan/planner.hpp"
#include "json.hpp"

namespace gravplan {

struct RunResult {
  std::string model_id;
  std::string formulation;
  std::size_t size = 0;
  std::size_t task = 0;
  bool solved = false;
  /// Empty when solved; otherwise timeout, memory, exhausted or error.
  std::string reason;
  std::string error;
  double runtime = 0.0;     // search CPU seconds
  double load_time = 0.0;   // parse + ground CPU seconds
  double cutoff = 0.0;
  double delta = 1.0;
  std::size_t expanded = 0;
  std::size_t generated = 0;
  std::optional<double> makespan;
  /// valid / invalid when solved, n/a otherwise.
  std::string validation = "n/a";
  std::string plan;

  bool operator==(const RunResult&) const = default;
};

struct BenchConfig {
  PlannerConfig planner;
  std::size_t workers = 1;
  /// Wall-clock slack before the watchdog cancels a run that ignores its
  /// CPU cutoff (e.g. starved of CPU by other workers).
  double watchdog_factor = 3.0;
};

class BenchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Plans one manifest model. Missing or malformed files give an error result.
RunResult run_model(const nlohmann::json& model, const std::filesystem::path& base,
                    const PlannerConfig& cfg);

/// Runs every model of the manifest; results follow manifest order whatever
/// the worker count.
std::vector<RunResult> run_suite(const nlohmann::json& manifest, const std::filesystem::path& base,
                                 const BenchConfig& cfg);

/// Mean over instances of (runtime if solved else 10 x cutoff). Throws on empty cells.
double par10(const std::vector<RunResult>& cell, double cutoff);

struct CellStats {
  std::string formulation;
  std::size_t size = 0;
  std::size_t instances = 0;
  std::size_t solved = 0;
  std::size_t valid = 0;
  double coverage = 0.0;                // percent
  std::optional<double> mean_runtime;   // over solved instances only
  double par10 = 0.0;
  double median_expanded = 0.0;
};

/// `mean (coverage)` with one and zero decimals, `-- (0)` when nothing solved.
std::string render_cell(const CellStats& c);

struct SuiteReport {
  std::vector<std::string> formulations;  // row order
  std::vector<std::size_t> sizes;         // column order
  std::vector<CellStats> cells;
  std::size_t total_instances = 0;
  std::size_t total_solved = 0;
  double cutoff = 0.0;
  nlohmann::json metadata;

  const CellStats* cell(const std::string& formulation, std::size_t size) const;
};

SuiteReport aggregate_table(const std::vector<RunResult>& results);

std::string report_table(const SuiteReport& r);
/// Rows = formulations, columns = sizes, cells rendered as in the table.
std::string report_csv(const SuiteReport& r);
/// One PAR10 series per formulation over sizes.
std::string par10_csv(const SuiteReport& r);
nlohmann::json report_json(const SuiteReport& r);

struct TrendCheck {
  std::size_t pairs = 0;
  std::size_t nondecreasing = 0;
  double fraction = 0.0;
  bool passed = false;  // fraction >= 0.8
  std::vector<std::string> notes;
};

/// Median expanded nodes nondecreasing in size, per formulation.
TrendCheck difficulty_trend(const SuiteReport& r, double threshold = 0.8);

nlohmann::json result_to_json(const RunResult& r);
RunResult result_from_json(const nlohmann::json& j);
nlohmann::json results_to_json(const std::vector<RunResult>& rs);
std::vector<RunResult> results_from_json(const nlohmann::json& j);

/// Orders formulation labels as NG, UCM by value, UACM by value.
bool formulation_before(const std::string& a, const std::string& b);

}  // namespace gravplan
