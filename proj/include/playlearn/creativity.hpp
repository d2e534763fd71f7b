#ifndef PLAYLEARN_CREATIVITY_HPP
#define PLAYLEARN_CREATIVITY_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "playlearn/env_model.hpp"
#include "playlearn/ids.hpp"

namespace playlearn {

class PlayingNet;

struct CreativityParams {
  double gamma = 0.1;
  double delta = 0.95;
  std::size_t l_max = 4;
};

struct TargetState {
  StateId state;
  double p_void = 0.0;
};

/// States whose most probable behaviour is void (ties with void included).
std::vector<TargetState> find_target_states(const PlayingNet& net, SkillId skill, SensingActionId s);

struct CompoundProposal {
  std::vector<BehaviourId> path;
  StateId origin;
  StateId target;
  double curiosity = 0.0;
};

/// Best compound of 2 .. l_max - 1 behaviours whose greedy chain from e ends in a
/// target state, scored by path confidence times the target's void probability.
/// Chains with zero curiosity (an untrained step) are not proposals, nor are chains
/// returning to e. Empty when void strictly wins in e.
std::optional<CompoundProposal> propose_compound(const PlayingNet& net, const ForwardModel& model, StateId e,
                                                 const CreativityParams& params);

/// sig(gamma * cu + delta).
double acceptance_probability(double curiosity, double gamma, double delta);

/// Adds the compound to the proposal's skill: h_init (1 + cu) from the origin
/// state of sensing action s, h_init from every other state. Returns nothing if
/// the same sequence already exists.
std::optional<BehaviourId> insert_compound_playing(PlayingNet& net, SkillId skill, SensingActionId s,
                                                   const CompoundProposal& proposal, double h_init);

/// Adds (e, b) clips to every model of the skill. In the model of the current
/// sensing action the origin's greedy edge gets the weakest weight on the chain.
void insert_compound_env(std::span<ForwardModel* const> models, BehaviourId compound,
                         const CompoundProposal& proposal, SensingActionId current);

}  // namespace playlearn

#endif  // PLAYLEARN_CREATIVITY_HPP
