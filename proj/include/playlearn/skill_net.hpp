#ifndef PLAYLEARN_SKILL_NET_HPP
#define PLAYLEARN_SKILL_NET_HPP

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "playlearn/env_model.hpp"
#include "playlearn/ids.hpp"
#include "playlearn/params.hpp"
#include "playlearn/ps_core.hpp"
#include "playlearn/rng.hpp"
#include "playlearn/worlds.hpp"

namespace playlearn {

enum class BehaviourKind { atomic, void_behaviour, skill, compound };

struct Behaviour {
  BehaviourId id;
  std::string name;
  BehaviourKind kind = BehaviourKind::atomic;
  std::size_t world_behaviour = 0;     // atomic and void
  SkillId skill;                       // skill-as-behaviour
  std::vector<BehaviourId> sequence;   // compound, executed first to last
  Grasp grasp_outcome = Grasp::neutral;
};

/// Layered playing network: skill -> sensing action -> perceptual state -> behaviour.
///
/// The sensing -> state hop is made by the classifier, so only the
/// skill -> sensing and state -> behaviour layers carry weighted edges.
class PlayingNet {
 public:
  struct SensingLayer {
    SensingActionId id;
    ClipId clip;
    std::vector<ClipId> states;
    Grasp grasp_requirement = Grasp::neutral;
    double accuracy = 0.0;
  };

  struct SkillLayer {
    SkillId id;
    std::string name;
    std::size_t world_skill = 0;
    ClipId clip;
    std::vector<SensingLayer> sensing;
    std::vector<BehaviourId> behaviours;  // ascending ids
  };

  BehaviourId add_behaviour(Behaviour b);
  [[nodiscard]] const Behaviour& behaviour(BehaviourId id) const;
  [[nodiscard]] std::size_t behaviour_count() const { return behaviours_.size(); }

  SkillId add_skill(SkillLayer layer);
  [[nodiscard]] const SkillLayer& skill(SkillId id) const;
  [[nodiscard]] std::size_t skill_count() const { return skills_.size(); }
  [[nodiscard]] const SensingLayer& sensing_layer(SkillId skill, SensingActionId s) const;

  [[nodiscard]] ClipId state_clip(SkillId skill, SensingActionId s, StateId e) const;
  [[nodiscard]] ClipId behaviour_clip(BehaviourId b) const;
  [[nodiscard]] BehaviourId behaviour_at(ClipId clip) const;
  [[nodiscard]] SensingActionId sensing_at(SkillId skill, ClipId clip) const;

  /// Adds b to the skill and connects every state clip of every sensing action with weight h.
  void attach_behaviour(SkillId skill, BehaviourId b, double h);
  [[nodiscard]] bool has_behaviour(SkillId skill, BehaviourId b) const;
  [[nodiscard]] std::optional<BehaviourId> void_behaviour(SkillId skill) const;
  [[nodiscard]] std::optional<BehaviourId> find_compound(SkillId skill, std::span<const BehaviourId> seq) const;

  /// p(b | e), in the skill's behaviour order.
  [[nodiscard]] std::vector<double> behaviour_probabilities(SkillId skill, SensingActionId s, StateId e) const;
  [[nodiscard]] double state_weight(SkillId skill, SensingActionId s, StateId e, BehaviourId b) const;
  void set_state_weight(SkillId skill, SensingActionId s, StateId e, BehaviourId b, double h);

  [[nodiscard]] ClipNetwork& network() { return network_; }
  [[nodiscard]] const ClipNetwork& network() const { return network_; }

 private:
  ClipNetwork network_;
  std::vector<Behaviour> behaviours_;
  std::vector<ClipId> behaviour_clips_;
  std::vector<SkillLayer> skills_;
  // clip value -> behaviour id value, or npos.
  std::vector<std::uint32_t> clip_behaviour_;
};

struct SkillRegistration {
  struct Sensing {
    SensingActionId id;
    std::size_t state_count = 0;
    double accuracy = 0.0;  // r_s in [0,1]
    Grasp grasp_requirement = Grasp::neutral;
  };
  std::string name;
  std::size_t world_skill = 0;
  bool requires_grasp = false;
  std::vector<Sensing> sensing;
  std::vector<BehaviourId> behaviours;
};

struct RolloutOptions {
  bool boredom = false;
  bool creativity = false;
};

struct RolloutRecord {
  SkillId skill;
  SensingActionId sensing;
  StateId estimated_state;
  std::optional<StateId> prepared_state;  // re-sensed after the behaviour
  BehaviourId behaviour;
  bool success = false;
  double reward = 0.0;
  bool bored = false;
  bool creative = false;  // a compound was inserted during this rollout
  std::size_t start_latent = 0;
  std::size_t sensing_phases = 0;
};

/// One learning agent: playing network, forward models and reward history.
class Agent {
 public:
  explicit Agent(Params params = {});

  [[nodiscard]] const Params& params() const { return params_; }
  [[nodiscard]] PlayingNet& net() { return net_; }
  [[nodiscard]] const PlayingNet& net() const { return net_; }

  BehaviourId add_atomic_behaviour(std::string name, std::size_t world_behaviour, Grasp grasp, bool is_void = false);
  /// Wraps a world behaviour; returns the existing id when already wrapped.
  BehaviourId wrap_world_behaviour(const WorldSpec& spec, std::size_t world_behaviour);

  SkillId register_skill(const SkillRegistration& reg);
  /// Registers a world skill with its seeded preparatory behaviours and calibrated sensing.
  SkillId register_world_skill(const WorldSpec& spec, std::size_t world_skill);

  RolloutRecord execute_rollout(SkillId skill, WorldInstance& world, RolloutOptions options, Rng& rng);

  void record_reward(SkillId skill, double reward);
  [[nodiscard]] bool is_well_trained(SkillId skill) const;
  void promote_to_behaviour(SkillId skill, std::span<const SkillId> targets);
  [[nodiscard]] std::optional<BehaviourId> promoted_behaviour(SkillId skill) const;

  /// Runs a behaviour on the world; compounds expand to their constituents.
  void execute_behaviour(BehaviourId b, WorldInstance& world, Rng& rng, int depth = 0);
  /// Atomic/void/skill constituents of b, in execution order.
  [[nodiscard]] std::vector<BehaviourId> flatten(BehaviourId b) const;

  [[nodiscard]] ForwardModel& model(SkillId skill, SensingActionId s);
  [[nodiscard]] const ForwardModel& model(SkillId skill, SensingActionId s) const;
  [[nodiscard]] std::vector<ForwardModel*> models_of(SkillId skill);

  /// Promote automatically into every other skill once well-trained.
  bool auto_promote = true;

 private:
  void run_skill_policy(SkillId skill, WorldInstance& world, Rng& rng, int depth);
  void add_behaviour_to_models(SkillId skill, BehaviourId b);

  Params params_;
  PlayingNet net_;
  std::vector<ForwardModel> models_;
  // model_index_[skill][sensing position in layer]
  std::vector<std::vector<std::size_t>> model_index_;
  std::vector<std::deque<double>> rewards_;
  std::vector<std::optional<BehaviourId>> promoted_;
  std::vector<std::optional<BehaviourId>> world_wrappers_;
};

}  // namespace playlearn

#endif  // PLAYLEARN_SKILL_NET_HPP
