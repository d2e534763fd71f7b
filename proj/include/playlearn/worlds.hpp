#ifndef PLAYLEARN_WORLDS_HPP
#define PLAYLEARN_WORLDS_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "playlearn/rng.hpp"

namespace playlearn {

/// Grasp effect of a behaviour, or grasp requirement of a sensing action.
enum class Grasp { neutral, grasped, ungrasped };

Grasp parse_grasp(const std::string& text);
const char* to_string(Grasp g);

struct WorldBehaviour {
  std::string name;
  std::vector<std::size_t> table;  // latent -> latent on success
  double success_rate = 1.0;
  Grasp grasp = Grasp::neutral;
};

struct WorldSensing {
  std::string name;
  // confusion[latent][percept]; every row sums to 1.
  std::vector<std::vector<double>> confusion;
  Grasp grasp_requirement = Grasp::neutral;
  // Overrides the confusion-diagonal estimate (e.g. a single-state sensor).
  std::optional<double> fixed_accuracy;

  [[nodiscard]] std::size_t percept_count() const {
    return confusion.empty() ? 0 : confusion.front().size();
  }
};

struct WorldSkill {
  std::string name;
  std::size_t basic_behaviour = 0;
  std::vector<bool> success;                 // predicate per latent state
  std::vector<std::size_t> preparatory;      // seeded behaviours; void first
  bool requires_grasp = false;
};

/// Immutable ground truth of a simulated environment.
struct WorldSpec {
  std::string name;
  std::vector<std::string> latent_states;
  std::vector<WorldBehaviour> behaviours;
  std::vector<WorldSensing> sensing;
  std::vector<WorldSkill> skills;

  [[nodiscard]] std::size_t latent_count() const { return latent_states.size(); }
  [[nodiscard]] std::size_t behaviour_index(const std::string& name) const;
  [[nodiscard]] std::size_t sensing_index(const std::string& name) const;
  [[nodiscard]] std::size_t skill_index(const std::string& name) const;

  /// Throws Error on inconsistent tables or confusion rows.
  void validate() const;
};

struct BookWorldOptions {
  std::size_t num_distractors = 0;
  // false seeds only void, rotate90 and flip (the creativity condition).
  bool include_compound_rotations = true;
  double controller_success = 0.95;
  double slide_accuracy = 0.95;
  double basic_success = 0.95;
};

/// Book grasping: four orientations, rotations map phi -> (phi - k) mod 360.
WorldSpec make_book_world(const BookWorldOptions& options = {});

struct TowerWorldOptions {
  double controller_success = 0.95;
  double poke_accuracy = 0.95;
  double basic_success = 0.95;
};

/// Tower of up to three boxes; height 0 is the goal.
WorldSpec make_tower_world(const TowerWorldOptions& options = {});

/// Loads a world definition from a JSON document (schema in worlds/README.md).
WorldSpec load_world(const std::string& path);
WorldSpec parse_world(const std::string& json_text);

/// Expected classification accuracy of a sensing action.
double calibrate_sensing_accuracy(const WorldSpec& spec, std::size_t sensing);

/// One running copy of a world. All draws use the instance's own stream.
class WorldInstance {
 public:
  WorldInstance(std::shared_ptr<const WorldSpec> spec, std::uint64_t seed);

  [[nodiscard]] const WorldSpec& spec() const { return *spec_; }
  [[nodiscard]] std::size_t latent() const { return latent_; }

  void reset(std::size_t latent);
  void reset_uniform();

  void apply_behaviour(std::size_t behaviour);
  [[nodiscard]] std::size_t sense(std::size_t sensing);

  /// Executes the skill's basic behaviour and evaluates its predicate.
  bool evaluate_success(std::size_t skill);

 private:
  std::shared_ptr<const WorldSpec> spec_;
  std::size_t latent_ = 0;
  Rng rng_;
};

}  // namespace playlearn

#endif  // PLAYLEARN_WORLDS_HPP
