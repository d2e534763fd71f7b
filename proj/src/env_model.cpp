#include "playlearn/env_model.hpp"

#include <string>

#include "playlearn/error.hpp"

namespace playlearn {

ForwardModel::ForwardModel(SkillId skill, SensingActionId sensing, std::size_t state_count, double h_init_env)
    : skill_(skill), sensing_(sensing), h_init_env_(h_init_env) {
  if (state_count == 0) throw Error("forward model without states");
  if (!(h_init_env > 0.0)) throw Error("nonpositive weight");
  for (std::size_t e = 0; e < state_count; ++e) {
    state_clips_.push_back(network_.add_clip("e" + std::to_string(e)));
  }
}

bool ForwardModel::knows(BehaviourId b) const {
  return b.value < pair_clips_.size() && !pair_clips_[b.value].empty();
}

void ForwardModel::ensure_pair_clips(BehaviourId b) {
  if (knows(b)) return;
  if (pair_clips_.size() <= b.value) pair_clips_.resize(b.value + 1);
  auto& clips = pair_clips_[b.value];
  for (std::size_t e = 0; e < state_clips_.size(); ++e) {
    const ClipId pc = network_.add_clip("e" + std::to_string(e) + "|b" + std::to_string(b.value));
    for (ClipId target : state_clips_) network_.connect(pc, target, h_init_env_);
    clips.push_back(pc);
  }
}

ClipId ForwardModel::pair_clip(StateId e, BehaviourId b) const {
  if (!knows(b)) throw Error("missing percept clip for behaviour " + std::to_string(b.value));
  if (e.value >= state_clips_.size()) throw Error("unknown state " + std::to_string(e.value));
  return pair_clips_[b.value][e.value];
}

ClipId ForwardModel::state_clip(StateId e) const {
  if (e.value >= state_clips_.size()) throw Error("unknown state " + std::to_string(e.value));
  return state_clips_[e.value];
}

void ForwardModel::observe_transition(StateId e, BehaviourId b, StateId after, double r_env, double zeta) {
  const EdgeRef edge{pair_clip(e, b), state_clip(after)};
  network_.reinforce(std::span<const EdgeRef>(&edge, 1), r_env, zeta);
}

std::vector<double> ForwardModel::predict(StateId e, BehaviourId b) const {
  const auto edges = network_.out_edges(pair_clip(e, b));
  double total = 0.0;
  for (const auto& edge : edges) total += edge.h;
  // State clips were created first, so clip id == state index.
  std::vector<double> p(state_clips_.size(), 0.0);
  for (const auto& edge : edges) p[edge.to.value] = edge.h / total;
  return p;
}

double ForwardModel::weight(StateId e, BehaviourId b, StateId after) const {
  return network_.weight(pair_clip(e, b), state_clip(after));
}

void ForwardModel::set_weight(StateId e, BehaviourId b, StateId after, double h) {
  network_.connect(pair_clip(e, b), state_clip(after), h);
}

}  // namespace playlearn
