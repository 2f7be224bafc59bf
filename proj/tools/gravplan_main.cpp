#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gravplan/bench.hpp"
#include "gravplan/encodings.hpp"
#include "gravplan/generator.hpp"
#include "gravplan/pddl/parser.hpp"
#include "gravplan/planner.hpp"
#include "gravplan/validator.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace gravplan;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

GroundedTask load_task(const std::string& domain, const std::string& problem) {
  std::vector<pddl::Diagnostic> notes;
  pddl::DomainModel d = pddl::parse_domain(read_file(domain), &notes);
  pddl::ProblemModel p = pddl::parse_problem(read_file(problem), &d, &notes);
  for (const auto& n : notes)
    std::cerr << fmt::format("note: {}:{}: {}\n", n.location.line, n.location.column, n.message);
  GroundedTask t = ground(d, p);
  for (const auto& diag : t.diagnostics) std::cerr << "warning: " << diag << "\n";
  return t;
}

struct PlannerOptions {
  double delta = 1.0;
  std::string heuristic = "angular-rate";
  std::string search = "greedy-best-first";
  double weight = 1.0;
  double cutoff = 300.0;
  double memory_mb = 2048;
  bool no_helpful = false;
  bool no_exploration = false;

  void add(CLI::App* app) {
    app->add_option("--delta", delta, "time step in seconds")->check(CLI::PositiveNumber);
    app->add_option("--heuristic", heuristic, "blind | unsat-count | angular-rate");
    app->add_option("--search", search, "greedy-best-first | weighted-astar");
    app->add_option("--weight", weight, "weight for weighted A*");
    app->add_option("--cutoff", cutoff, "CPU-time cutoff in seconds")->check(CLI::PositiveNumber);
    app->add_option("--memory-mb", memory_mb, "memory cap in MiB")->check(CLI::PositiveNumber);
    app->add_flag("--no-helpful", no_helpful, "disable helpful-action pruning");
    app->add_flag("--no-exploration", no_exploration, "disable the type-based frontier");
  }

  PlannerConfig config() const {
    PlannerConfig c;
    c.delta = delta;
    c.heuristic = parse_heuristic(heuristic);
    c.search = parse_search(search);
    c.weight = weight;
    c.cutoff = cutoff;
    c.memory_cap = static_cast<std::size_t>(memory_mb * 1024.0 * 1024.0);
    c.helpful_actions = !no_helpful;
    c.type_exploration = !no_exploration;
    return c;
  }
};

std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoul(item));
  return out;
}

std::vector<GravityFormulation> parse_formulations(const std::string& s) {
  std::vector<GravityFormulation> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(GravityFormulation::parse(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planning for articulated-object manipulation under gravity"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a task corpus and its manifest");
  std::string gen_out = "corpus", gen_sizes, gen_forms, gen_preset = "full", gen_from;
  std::size_t gen_per_size = 5;
  std::uint64_t gen_seed = 2020;
  double gen_grid = 45.0, gen_sigma = 3.0;
  gen->add_option("--out", gen_out, "output directory");
  gen->add_option("--preset", gen_preset, "full (sizes 3-12) | desk (sizes 3-6)");
  gen->add_option("--sizes", gen_sizes, "comma-separated sizes, overrides the preset");
  gen->add_option("--formulations", gen_forms, "comma-separated labels, e.g. NG,UCM0.5");
  gen->add_option("--per-size", gen_per_size, "tasks per size");
  gen->add_option("--seed", gen_seed, "suite seed");
  gen->add_option("--grid", gen_grid, "orientation grid in degrees");
  gen->add_option("--sigma", gen_sigma, "initial-angle noise in degrees");
  gen->add_option("--from-manifest", gen_from, "regenerate the corpus described by a manifest");

  // encode
  auto* enc = app.add_subcommand("encode", "emit a domain and optionally a generated problem");
  std::string enc_form = "UCM0.5", enc_domain_out = "-", enc_problem_out;
  std::size_t enc_size = 4;
  std::uint64_t enc_seed = 1;
  bool enc_both = false;
  enc->add_option("formulation", enc_form, "NG | UCM<speed> | UACM<accel>")->required();
  enc->add_option("--domain-out", enc_domain_out, "domain file (- for stdout)");
  enc->add_option("--problem-out", enc_problem_out, "also write a generated problem here");
  enc->add_option("--size", enc_size, "links of the generated task");
  enc->add_option("--seed", enc_seed, "seed of the generated task");
  enc->add_flag("--both-directions", enc_both, "allow holding either link of a joint");

  // plan
  auto* pl = app.add_subcommand("plan", "search for a plan");
  std::string pl_domain, pl_problem, pl_out = "-", pl_json;
  PlannerOptions pl_opts;
  pl->add_option("domain", pl_domain)->required();
  pl->add_option("problem", pl_problem)->required();
  pl->add_option("--out", pl_out, "plan file (- for stdout)");
  pl->add_option("--json", pl_json, "write run metadata as JSON");
  pl_opts.add(pl);

  // validate
  auto* val = app.add_subcommand("validate", "replay a plan and check the goal");
  std::string val_domain, val_problem, val_plan;
  double val_delta = 1.0;
  bool val_json = false;
  val->add_option("domain", val_domain)->required();
  val->add_option("problem", val_problem)->required();
  val->add_option("plan", val_plan)->required();
  val->add_option("--delta", val_delta)->check(CLI::PositiveNumber);
  val->add_flag("--json", val_json, "print the report as JSON");

  // bench
  auto* bn = app.add_subcommand("bench", "plan every model of a manifest");
  std::string bn_manifest, bn_out = "results.json";
  std::size_t bn_workers = 1;
  PlannerOptions bn_opts;
  bn->add_option("manifest", bn_manifest)->required();
  bn->add_option("--out", bn_out, "results file");
  bn->add_option("--workers", bn_workers, "concurrent planner runs");
  bn_opts.add(bn);

  // report
  auto* rp = app.add_subcommand("report", "summarize results");
  std::string rp_results, rp_format = "table", rp_dir;
  rp->add_option("results", rp_results)->required();
  rp->add_option("--format", rp_format, "table | csv | json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  rp->add_option("--out-dir", rp_dir, "also write report.csv, par10.csv and report.json here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      SuiteSpec spec;
      if (!gen_from.empty()) {
        spec = spec_from_manifest(nlohmann::json::parse(read_file(gen_from)));
      } else {
        spec = gen_preset == "desk" ? desk_suite() : SuiteSpec{};
        if (!gen_sizes.empty()) spec.sizes = parse_sizes(gen_sizes);
        if (!gen_forms.empty()) spec.formulations = parse_formulations(gen_forms);
        spec.per_size = gen_per_size;
        spec.seed = gen_seed;
        spec.grid = gen_grid;
        spec.sigma = gen_sigma;
      }
      Suite suite = build_suite(spec);
      fs::path manifest = write_suite(suite, gen_out);
      std::cout << fmt::format("{} models, manifest {}\n", suite.models.size(), manifest.string());
      return 0;
    }
    if (enc->parsed()) {
      GravityFormulation f = GravityFormulation::parse(enc_form);
      EncodingOptions opts;
      opts.both_directions = enc_both;
      write_file(enc_domain_out, encode_domain_text(f, opts));
      if (!enc_problem_out.empty()) {
        GenSpec g;
        g.size = enc_size;
        g.seed = enc_seed;
        Task t = generate_task(g);
        write_file(enc_problem_out, encode_problem_text(t, f, "task", opts));
      }
      return 0;
    }
    if (pl->parsed()) {
      GroundedTask task = load_task(pl_domain, pl_problem);
      PlannerConfig cfg = pl_opts.config();
      PlanResult r = plan(task, cfg);
      nlohmann::json meta = {{"solved", r.solved},
                             {"reason", r.solved ? "" : reason_name(r.reason)},
                             {"runtime", r.runtime},
                             {"expanded", r.expanded},
                             {"generated", r.generated},
                             {"makespan", r.solved ? nlohmann::json(r.plan.makespan()) : nullptr}};
      if (r.solved) {
        ValidationReport v = validate_plan(task, r.plan, cfg.delta);
        write_file(pl_out, format_plan(r.plan, &v.trace));
        meta["validation"] = v.valid ? "valid" : "invalid";
      } else {
        std::cerr << "unsolved: " << reason_name(r.reason) << "\n";
      }
      if (!pl_json.empty()) write_file(pl_json, meta.dump(2) + "\n");
      std::cerr << fmt::format("runtime {:.3f} s, expanded {}, generated {}\n", r.runtime,
                               r.expanded, r.generated);
      return r.solved ? 0 : 2;
    }
    if (val->parsed()) {
      GroundedTask task = load_task(val_domain, val_problem);
      Plan p = parse_plan(read_file(val_plan));
      ValidationReport r = validate_plan(task, p, val_delta);
      if (val_json)
        std::cout << report_to_json(task, r).dump(2) << "\n";
      else
        std::cout << format_report(r);
      return r.valid ? 0 : 2;
    }
    if (bn->parsed()) {
      nlohmann::json manifest = nlohmann::json::parse(read_file(bn_manifest));
      BenchConfig cfg;
      cfg.planner = bn_opts.config();
      cfg.workers = bn_workers;
      auto results = run_suite(manifest, fs::path(bn_manifest).parent_path(), cfg);
      write_file(bn_out, results_to_json(results).dump(2) + "\n");
      SuiteReport rep = aggregate_table(results);
      std::cout << report_table(rep);
      return 0;
    }
    if (rp->parsed()) {
      auto results = results_from_json(nlohmann::json::parse(read_file(rp_results)));
      SuiteReport rep = aggregate_table(results);
      if (rp_format == "csv")
        std::cout << report_csv(rep);
      else if (rp_format == "json")
        std::cout << report_json(rep).dump(2) << "\n";
      else
        std::cout << report_table(rep);
      if (!rp_dir.empty()) {
        fs::create_directories(rp_dir);
        write_file((fs::path(rp_dir) / "report.csv").string(), report_csv(rep));
        write_file((fs::path(rp_dir) / "par10.csv").string(), par10_csv(rep));
        write_file((fs::path(rp_dir) / "report.json").string(), report_json(rep).dump(2) + "\n");
      }
      return 0;
    }
  } catch (const pddl::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
