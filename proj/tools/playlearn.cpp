// playlearn: run projective-simulation play experiments and write success curves.
//
//   playlearn run --world book --behaviours 10 --active-learning --out curve.csv
//   playlearn grid --js 5,10,15,20 --variants no_ext,active --out grid.csv
//   playlearn speedup grid.csv.summary.json

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "playlearn/error.hpp"
#include "playlearn/harness.hpp"

using namespace playlearn;

namespace {

struct CommonFlags {
  std::string config;
  std::string world = "book";
  std::size_t behaviours = 5;
  std::size_t replicas = 1000;
  std::size_t rollouts = 300;
  std::uint64_t seed = 42;
  std::size_t smoothing = 10;
  std::size_t threads = 0;
  std::string initial = "uniform";
  double threshold = 0.9;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON config file; command-line flags override it");
  cmd->add_option("--world", f.world, "book, tower, or a path to a world JSON file");
  cmd->add_option("--robots,--replicas", f.replicas, "independent agents per curve")->check(CLI::PositiveNumber);
  cmd->add_option("--rollouts", f.rollouts, "rollouts per agent")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--smoothing", f.smoothing, "moving-average window")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", f.threads, "worker threads (0: all cores)");
  cmd->add_option("--initial-states", f.initial, "uniform or round_robin")
      ->check(CLI::IsMember({"uniform", "round_robin"}));
  cmd->add_option("--threshold", f.threshold, "convergence threshold")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--out", f.out, "output file; a .summary.json is written next to it")->required();
  cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

ExperimentConfig make_config(CLI::App* cmd, const CommonFlags& f) {
  ExperimentConfig c;
  if (!f.config.empty()) c = load_config(f.config, c);
  auto given = [&](const char* name) {
    const auto* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--world")) c.world = f.world;
  if (given("--behaviours")) c.behaviours = f.behaviours;
  if (given("--robots")) c.replicas = f.replicas;
  if (given("--rollouts")) c.rollouts = f.rollouts;
  if (given("--seed")) c.seed = f.seed;
  if (given("--smoothing")) c.smoothing = f.smoothing;
  if (given("--threads")) c.threads = f.threads;
  if (given("--initial-states")) {
    c.initial_states = f.initial == "round_robin" ? InitialStates::round_robin : InitialStates::uniform;
  }
  return c;
}

void report(const ResultSet& rs) {
  for (const auto& e : rs.entries) {
    std::cerr << fmt::format("{:<8} {:<6} J={:<3} converged_at={}\n", e.variant, e.world, e.j,
                             e.converged ? std::to_string(*e.converged) : std::string("never"));
  }
  if (rs.speedup) std::cerr << fmt::format("speedup (active vs no_ext): {:.4f}\n", *rs.speedup);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string::npos ? s.size() : comma;
    if (end > start) out.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projective-simulation play experiments"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  bool active = false;
  bool creativity = false;
  auto* run = app.add_subcommand("run", "simulate one configuration");
  add_common(run, run_flags);
  run->add_option("--behaviours", run_flags.behaviours, "number of behaviours J (book world)")
      ->check(CLI::PositiveNumber);
  run->add_flag("--active-learning", active, "enable boredom-driven sensing restarts");
  run->add_flag("--creativity", creativity, "enable compound-behaviour creation");

  CommonFlags grid_flags;
  std::string js_text = "5,10,15,20";
  std::string variants_text = "no_ext,active";
  auto* grid = app.add_subcommand("grid", "simulate J x variant and fit the speedup");
  add_common(grid, grid_flags);
  grid->add_option("--js", js_text, "comma-separated J values");
  grid->add_option("--variants", variants_text, "comma-separated subset of no_ext,active,creative");

  std::string summary;
  std::string variant_a = "active";
  std::string variant_b = "no_ext";
  auto* speedup = app.add_subcommand("speedup", "asymptotic speedup from a summary file");
  speedup->add_option("summary", summary, "summary JSON written by run or grid")->required();
  speedup->add_option("--variant", variant_a, "faster variant");
  speedup->add_option("--reference", variant_b, "reference variant");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ExperimentConfig c = make_config(run, run_flags);
      if (run->count("--active-learning")) c.active_learning = active;
      if (run->count("--creativity")) c.creativity = creativity;
      c.validate();
      ResultSet rs;
      rs.threshold = run_flags.threshold;
      rs.seed = c.seed;
      rs.replicas = c.replicas;
      rs.entries.push_back(run_entry(c, run_flags.threshold));
      emit_results(rs, parse_format(run_flags.format), run_flags.out);
      report(rs);
    } else if (*grid) {
      ExperimentConfig c = make_config(grid, grid_flags);
      std::vector<std::size_t> js;
      for (const auto& s : split(js_text)) {
        try {
          js.push_back(std::stoul(s));
        } catch (const std::exception&) {
          throw Error("bad J value '" + s + "'");
        }
      }
      const auto variants = split(variants_text);
      if (js.empty() || variants.empty()) throw Error("grid needs at least one J and one variant");
      const ResultSet rs = run_grid(c, js, variants, grid_flags.threshold);
      emit_results(rs, parse_format(grid_flags.format), grid_flags.out);
      report(rs);
    } else if (*speedup) {
      std::cout << fmt::format("{:.6f}\n", speedup_from_summary(summary, variant_a, variant_b));
    }
  } catch (const Error& e) {
    std::cerr << "playlearn: " << e.what() << "\n";
    return 1;
  }
  return EXIT_SUCCESS;
}
