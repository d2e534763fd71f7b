#ifndef PLAYLEARN_INTROSPECT_HPP
#define PLAYLEARN_INTROSPECT_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "playlearn/env_model.hpp"
#include "playlearn/ids.hpp"

namespace playlearn {

class PlayingNet;

struct IntrospectParams {
  double beta = 0.8;
  double epsilon = 0.1;
  std::size_t l_max = 4;  // paths have 1 .. l_max - 1 behaviours
};

/// Shannon entropy in bits divided by log2(n); 0 log 0 = 0. Requires n >= 2.
double normalized_entropy(std::span<const double> probabilities);

/// Normalised entropy of the behaviour distribution in state e.
double normalized_policy_entropy(const PlayingNet& net, SkillId skill, SensingActionId s, StateId e);

/// p(bored | e) = 1 - beta * H.
double boredom_probability(double entropy, double beta);

/// 1 - normalised entropy of the predicted successor distribution.
double single_transition_confidence(const ForwardModel& model, StateId e, BehaviourId b);

/// Most likely resulting state; ties go to the lowest state id.
StateId successor(const ForwardModel& model, StateId e, BehaviourId b);

/// Product of single-step confidences along the greedy successor chain.
double path_confidence(const ForwardModel& model, StateId e, std::span<const BehaviourId> path);

/// Final state of the greedy chain.
StateId path_successor(const ForwardModel& model, StateId e, std::span<const BehaviourId> path);

struct TransitionPlan {
  std::vector<BehaviourId> path;
  StateId target;
  double desirability = 0.0;
};

/// Number of behaviour sequences of length 1 .. l_max - 1 over j behaviours.
std::size_t candidate_count(std::size_t j, std::size_t l_max);

/// Successor and confidence of every (state, behaviour) pair of one forward model,
/// in the skill's behaviour order. Shared by the planners.
struct TransitionTable {
  std::vector<BehaviourId> behaviours;
  std::size_t states = 0;
  std::vector<StateId> next;        // [state * J + k]
  std::vector<double> confidence;   // [state * J + k]
  std::vector<double> next_weight;  // weight of the greedy edge

  TransitionTable(const ForwardModel& model, std::span<const BehaviourId> behaviours);
  [[nodiscard]] std::size_t at(StateId e, std::size_t k) const { return e.value * behaviours.size() + k; }
};

/// Maximises H(su(e, b)) * nu(e, b) + epsilon / |b| over all paths up to l_max - 1.
/// Ties prefer shorter paths, then the lexicographically smallest sequence.
/// Empty when the sensing action has fewer than two states.
std::optional<TransitionPlan> plan_desirable_transition(const PlayingNet& net, const ForwardModel& model,
                                                        StateId e, const IntrospectParams& params);

}  // namespace playlearn

#endif  // PLAYLEARN_INTROSPECT_HPP
