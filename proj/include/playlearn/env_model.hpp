#ifndef PLAYLEARN_ENV_MODEL_HPP
#define PLAYLEARN_ENV_MODEL_HPP

#include <cstddef>
#include <vector>

#include "playlearn/ids.hpp"
#include "playlearn/ps_core.hpp"

namespace playlearn {

/// Forward model p(e' | e, b) of one (skill, sensing action) pair.
///
/// Percept clips are (state, behaviour) pairs; each connects to every state
/// clip of the same sensing action. Learned from re-sensing after a
/// preparatory behaviour.
class ForwardModel {
 public:
  ForwardModel(SkillId skill, SensingActionId sensing, std::size_t state_count, double h_init_env);

  [[nodiscard]] SkillId skill() const { return skill_; }
  [[nodiscard]] SensingActionId sensing() const { return sensing_; }
  [[nodiscard]] std::size_t state_count() const { return state_clips_.size(); }
  [[nodiscard]] double h_init_env() const { return h_init_env_; }

  /// Adds (e, b) clips for every state with uniform weights. Idempotent.
  void ensure_pair_clips(BehaviourId b);
  [[nodiscard]] bool knows(BehaviourId b) const;

  /// Rewards (e, b) -> after with r_env through the projective-simulation rule.
  void observe_transition(StateId e, BehaviourId b, StateId after, double r_env, double zeta = 0.0);

  /// Normalised distribution over resulting states, indexed by StateId.
  [[nodiscard]] std::vector<double> predict(StateId e, BehaviourId b) const;

  [[nodiscard]] double weight(StateId e, BehaviourId b, StateId after) const;
  void set_weight(StateId e, BehaviourId b, StateId after, double h);

  [[nodiscard]] const ClipNetwork& network() const { return network_; }

 private:
  ClipId pair_clip(StateId e, BehaviourId b) const;
  ClipId state_clip(StateId e) const;

  SkillId skill_;
  SensingActionId sensing_;
  double h_init_env_;
  ClipNetwork network_;
  std::vector<ClipId> state_clips_;
  // pair_clips_[b][e]; empty for behaviours not (yet) in the model.
  std::vector<std::vector<ClipId>> pair_clips_;
};

}  // namespace playlearn

#endif  // PLAYLEARN_ENV_MODEL_HPP
