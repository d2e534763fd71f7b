#ifndef PLAYLEARN_HARNESS_HPP
#define PLAYLEARN_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "playlearn/params.hpp"
#include "playlearn/skill_net.hpp"
#include "playlearn/worlds.hpp"

namespace playlearn {

enum class InitialStates { uniform, round_robin };

struct ExperimentConfig {
  std::string world = "book";  // "book", "tower" or a path to a world JSON file
  std::size_t behaviours = 5;  // J; book world only
  bool active_learning = false;
  bool creativity = false;
  std::size_t replicas = 1000;
  std::size_t rollouts = 300;
  std::uint64_t seed = 42;
  std::size_t smoothing = 10;
  InitialStates initial_states = InitialStates::uniform;
  Params params;
  // Reliability of the built-in worlds. The convergence protocol runs with
  // reliable controllers; see README for the 0.95 sensitivity runs.
  double controller_success = 1.0;
  double sensing_accuracy = 1.0;
  double basic_success = 1.0;
  std::size_t threads = 0;  // 0: hardware concurrency

  void validate() const;
  /// no_ext, active, creative (active + creativity) or creative_only.
  [[nodiscard]] std::string variant() const;
};

/// Overrides fields of `base` from a JSON object; unknown keys are rejected.
ExperimentConfig apply_config_json(const std::string& json_text, ExperimentConfig base);
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

std::shared_ptr<const WorldSpec> build_world(const ExperimentConfig& config);

struct SuccessCurve {
  std::vector<double> raw;       // fraction of replicas succeeding at rollout t
  std::vector<double> smoothed;  // centred moving average of raw
  std::size_t replicas = 0;
  std::size_t window = 1;
};

/// Centred moving average over [t - w/2, t - w/2 + w), truncated at the ends.
std::vector<double> centered_moving_average(std::span<const double> values, std::size_t window);
SuccessCurve make_curve(std::span<const std::uint32_t> successes, std::size_t replicas, std::size_t window);

struct ReplicaRun {
  std::vector<RolloutRecord> records;
  Agent agent;
  SkillId skill;
};

ReplicaRun run_replica_full(const ExperimentConfig& config, std::size_t replica_index);
std::vector<RolloutRecord> run_replica(const ExperimentConfig& config, std::size_t replica_index);

struct ExperimentOutcome {
  SuccessCurve curve;
  // [rollout][latent] counts of replicas starting there / succeeding from there.
  std::vector<std::vector<std::uint32_t>> starts_by_latent;
  std::vector<std::vector<std::uint32_t>> successes_by_latent;
  std::size_t bored_rollouts = 0;
  std::size_t creative_insertions = 0;
  // Per replica: every compound the agent created, flattened to world behaviour names.
  std::vector<std::vector<std::vector<std::string>>> compounds;
};

ExperimentOutcome run_experiment_detailed(const ExperimentConfig& config);
SuccessCurve run_experiment(const ExperimentConfig& config);

/// Success curve restricted to rollouts that started in `latent`.
SuccessCurve conditional_curve(const ExperimentOutcome& outcome, std::size_t latent, std::size_t window);

/// First rollout index whose smoothed success reaches the threshold.
std::optional<std::size_t> convergence_rollout(const SuccessCurve& curve, double threshold = 0.9);

/// Try-every-combination baseline: 3 sensing actions x 4 states x J + J.
std::size_t baseline_rollouts(std::size_t j);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct SpeedupPoint {
  double j = 0.0;
  double variant_a = 0.0;  // rollouts to converge, faster variant
  double variant_b = 0.0;  // rollouts to converge, reference variant
};

/// 1 - slope_a / slope_b of least-squares lines through both variants.
double asymptotic_speedup(std::span<const SpeedupPoint> points);

struct ResultEntry {
  std::string variant;
  std::string world;
  std::size_t j = 0;
  SuccessCurve curve;
  std::optional<std::size_t> converged;
};

struct ResultSet {
  std::vector<ResultEntry> entries;
  double threshold = 0.9;
  std::uint64_t seed = 0;
  std::size_t replicas = 0;
  std::optional<double> speedup;  // active vs no_ext, when both are present
};

enum class OutputFormat { csv, json };

OutputFormat parse_format(const std::string& text);

ResultEntry run_entry(const ExperimentConfig& config, double threshold = 0.9);

/// Runs J x variant; variants are no_ext, active, creative.
ResultSet run_grid(const ExperimentConfig& base, std::span<const std::size_t> js,
                   std::span<const std::string> variants, double threshold = 0.9);

/// Fills ResultSet::speedup from the active and no_ext entries, if possible.
void compute_speedup(ResultSet& results);

std::string summary_path(const std::string& path);

/// Writes the curve table to `path` and the convergence summary to summary_path(path).
void emit_results(const ResultSet& results, OutputFormat format, const std::string& path);

/// Speedup of variant_a over variant_b from a summary file written by emit_results.
double speedup_from_summary(const std::string& path, const std::string& variant_a = "active",
                            const std::string& variant_b = "no_ext");

}  // namespace playlearn

#endif  // PLAYLEARN_HARNESS_HPP
