#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gravplan/encodings.hpp"
#include "gravplan/model.hpp"
#include "json.hpp"

namespace gravplan {

struct GenSpec {
  std::size_t size = 4;
  std::uint64_t seed = 1;
  double grid = 45.0;         // degrees between sampled orientations
  double sigma = 3.0;         // Gaussian noise on the initial angles
  double goal_offset = 0.5;   // threshold distance from the sampled target
  RateParams rates;
};

/// Throws std::invalid_argument on L < 2, a grid not dividing 360 or sigma < 0.
Task generate_task(const GenSpec& spec);

struct SuiteSpec {
  std::vector<std::size_t> sizes{3, 4, 5, 6, 7, 8, 10, 12};
  std::size_t per_size = 5;
  std::vector<GravityFormulation> formulations = benchmark_formulations();
  std::uint64_t seed = 2020;
  double grid = 45.0;
  double sigma = 3.0;
  double goal_offset = 0.5;
  RateParams rates;
};

/// Sizes 3-6, the scaled-down corpus used for acceptance runs.
SuiteSpec desk_suite();

struct ModelEntry {
  std::string id;  // s<size>_t<idx>_<formulation>
  std::size_t size = 0;
  std::size_t task = 0;  // 1-based
  std::string formulation;
  std::uint64_t task_seed = 0;
  std::string domain;   // relative to the manifest directory
  std::string problem;
};

struct GeneratedFile {
  std::string path;  // relative
  std::string content;
};

struct Suite {
  SuiteSpec spec;
  std::vector<ModelEntry> models;
  std::vector<GeneratedFile> files;
};

std::uint64_t task_seed(std::uint64_t suite_seed, std::size_t size, std::size_t index);
std::string problem_file_name(std::size_t size, std::size_t index, const GravityFormulation& f);
std::string domain_file_name(const GravityFormulation& f);

Suite build_suite(const SuiteSpec& spec);
nlohmann::json manifest_json(const Suite& suite);
SuiteSpec spec_from_manifest(const nlohmann::json& manifest);

/// Writes every file plus `manifest.json` into `dir`; returns the manifest path.
std::filesystem::path write_suite(const Suite& suite, const std::filesystem::path& dir);

}  // namespace gravplan
