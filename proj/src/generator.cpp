#include "gravplan/generator.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

namespace gravplan {

Task generate_task(const GenSpec& spec) {
  if (spec.size < 2) throw std::invalid_argument("an articulated object needs at least 2 links");
  if (!(spec.grid > 0) || std::fabs(std::remainder(360.0, spec.grid)) > 1e-9)
    throw std::invalid_argument("grid must divide 360");
  if (!(spec.sigma >= 0)) throw std::invalid_argument("sigma must be non-negative");
  if (!(spec.goal_offset > 0) || spec.goal_offset >= spec.grid / 2)
    throw std::invalid_argument("goal offset must lie in (0, grid/2)");

  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                    static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(spec.size)};
  std::mt19937_64 rng(seq);
  const int slots = static_cast<int>(std::lround(360.0 / spec.grid));
  std::uniform_int_distribution<int> slot(0, slots - 1);
  std::normal_distribution<double> noise(0.0, spec.sigma);

  auto round2 = [](double v) { return normalize_degrees(std::round(v * 100.0) / 100.0); };

  std::vector<LinkSpec> links;
  for (LinkIndex k = 1; k <= spec.size; ++k) {
    LinkSpec l;
    l.id = k;
    l.theta = round2(spec.grid * slot(rng) + (spec.sigma > 0 ? noise(rng) : 0.0));
    l.gamma = round2(spec.grid * slot(rng) + (spec.sigma > 0 ? noise(rng) : 0.0));
    links.push_back(l);
  }
  Task t;
  t.object = ArticulatedObject(links);
  t.initial = t.object.configuration();
  t.rates = spec.rates;
  for (LinkIndex k = 2; k <= spec.size; ++k) {
    for (Plane p : kPlanes) {
      double target = spec.grid * slot(rng);
      double initial = t.initial.at(k).on(p);
      GoalConstraint g;
      g.link = k;
      g.plane = p;
      if (target > initial) {
        g.op = pddl::Comparator::Greater;
        g.threshold = target - spec.goal_offset;
      } else {
        g.op = pddl::Comparator::Less;
        g.threshold = target + spec.goal_offset;
      }
      t.goal.push_back(g);
    }
  }
  return t;
}

SuiteSpec desk_suite() {
  SuiteSpec s;
  s.sizes = {3, 4, 5, 6};
  return s;
}

std::uint64_t task_seed(std::uint64_t suite_seed, std::size_t size, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(suite_seed),
                    static_cast<std::uint32_t>(suite_seed >> 32), static_cast<std::uint32_t>(size),
                    static_cast<std::uint32_t>(index)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::string domain_file_name(const GravityFormulation& f) {
  return "domain_" + f.label() + ".pddl";
}

std::string problem_file_name(std::size_t size, std::size_t index, const GravityFormulation& f) {
  return fmt::format("s{}_t{}_{}.pddl", size, index, f.label());
}

Suite build_suite(const SuiteSpec& spec) {
  Suite suite;
  suite.spec = spec;
  for (const auto& f : spec.formulations)
    suite.files.push_back({domain_file_name(f), encode_domain_text(f)});
  for (std::size_t size : spec.sizes) {
    for (std::size_t idx = 1; idx <= spec.per_size; ++idx) {
      GenSpec g;
      g.size = size;
      g.seed = task_seed(spec.seed, size, idx);
      g.grid = spec.grid;
      g.sigma = spec.sigma;
      g.goal_offset = spec.goal_offset;
      g.rates = spec.rates;
      Task t = generate_task(g);
      for (const auto& f : spec.formulations) {
        ModelEntry m;
        m.id = fmt::format("s{}_t{}_{}", size, idx, f.label());
        m.size = size;
        m.task = idx;
        m.formulation = f.label();
        m.task_seed = g.seed;
        m.domain = domain_file_name(f);
        m.problem = problem_file_name(size, idx, f);
        suite.files.push_back({m.problem, encode_problem_text(t, f, m.id)});
        suite.models.push_back(std::move(m));
      }
    }
  }
  return suite;
}

nlohmann::json manifest_json(const Suite& suite) {
  const SuiteSpec& s = suite.spec;
  nlohmann::json forms = nlohmann::json::array();
  for (const auto& f : s.formulations) forms.push_back(f.label());
  nlohmann::json models = nlohmann::json::array();
  for (const auto& m : suite.models)
    models.push_back({{"id", m.id},
                      {"size", m.size},
                      {"task", m.task},
                      {"formulation", m.formulation},
                      {"task_seed", m.task_seed},
                      {"domain", m.domain},
                      {"problem", m.problem}});
  return {{"seed", s.seed},
          {"sizes", s.sizes},
          {"per_size", s.per_size},
          {"formulations", forms},
          {"grid", s.grid},
          {"sigma", s.sigma},
          {"goal_offset", s.goal_offset},
          {"rates",
           {{"speed_i", s.rates.speed_i},
            {"speed_d", s.rates.speed_d},
            {"speed_g", s.rates.speed_g},
            {"accel_g", s.rates.accel_g}}},
          {"model_count", suite.models.size()},
          {"models", models}};
}

SuiteSpec spec_from_manifest(const nlohmann::json& j) {
  SuiteSpec s;
  s.seed = j.at("seed").get<std::uint64_t>();
  s.sizes = j.at("sizes").get<std::vector<std::size_t>>();
  s.per_size = j.at("per_size").get<std::size_t>();
  s.formulations.clear();
  for (const auto& f : j.at("formulations")) s.formulations.push_back(GravityFormulation::parse(f));
  s.grid = j.at("grid").get<double>();
  s.sigma = j.at("sigma").get<double>();
  s.goal_offset = j.at("goal_offset").get<double>();
  const auto& r = j.at("rates");
  s.rates.speed_i = r.at("speed_i").get<double>();
  s.rates.speed_d = r.at("speed_d").get<double>();
  s.rates.speed_g = r.at("speed_g").get<double>();
  s.rates.accel_g = r.at("accel_g").get<double>();
  return s;
}

std::filesystem::path write_suite(const Suite& suite, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
  };
  for (const auto& f : suite.files) write(dir / f.path, f.content);
  auto manifest = dir / "manifest.json";
  write(manifest, manifest_json(suite).dump(2) + "\n");
  return manifest;
}

}  // namespace gravplan
