#include "playlearn/creativity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "playlearn/error.hpp"
#include "playlearn/introspect.hpp"
#include "playlearn/skill_net.hpp"

namespace playlearn {

std::vector<TargetState> find_target_states(const PlayingNet& net, SkillId skill, SensingActionId s) {
  const auto void_b = net.void_behaviour(skill);
  if (!void_b) return {};
  const auto& behaviours = net.skill(skill).behaviours;
  const auto void_pos = static_cast<std::size_t>(
      std::lower_bound(behaviours.begin(), behaviours.end(), *void_b) - behaviours.begin());

  std::vector<TargetState> targets;
  const auto& layer = net.sensing_layer(skill, s);
  for (std::uint32_t e = 0; e < layer.states.size(); ++e) {
    const auto p = net.behaviour_probabilities(skill, s, StateId{e});
    const double top = *std::max_element(p.begin(), p.end());
    if (p[void_pos] >= top) targets.push_back({StateId{e}, p[void_pos]});
  }
  return targets;
}

namespace {

struct CompoundSearch {
  const TransitionTable& table;
  const std::vector<double>& p_void;  // negative for non-targets
  double p_void_max;
  StateId origin;  // a compound must leave its origin

  std::vector<std::size_t> prefix;
  std::vector<std::size_t> best_path;
  StateId best_target{};
  double best = 0.0;  // proposals need strictly positive curiosity

  void search(StateId e, double nu, std::size_t length) {
    if (prefix.size() == length) {
      if (p_void[e.value] < 0.0 || e == origin) return;
      const double cu = nu * p_void[e.value];
      if (cu > best) {
        best = cu;
        best_path = prefix;
        best_target = e;
      }
      return;
    }
    if (nu * p_void_max < best - 1e-12 || nu <= 0.0) return;
    for (std::size_t k = 0; k < table.behaviours.size(); ++k) {
      const std::size_t i = table.at(e, k);
      prefix.push_back(k);
      search(table.next[i], nu * table.confidence[i], length);
      prefix.pop_back();
    }
  }
};

}  // namespace

std::optional<CompoundProposal> propose_compound(const PlayingNet& net, const ForwardModel& model, StateId e,
                                                 const CreativityParams& params) {
  if (model.state_count() < 2 || params.l_max < 3) return std::nullopt;
  const auto targets = find_target_states(net, model.skill(), model.sensing());
  if (targets.empty()) return std::nullopt;

  std::vector<double> p_void(model.state_count(), -1.0);
  double p_void_max = 0.0;
  for (const auto& t : targets) {
    p_void[t.state.value] = t.p_void;
    p_void_max = std::max(p_void_max, t.p_void);
  }
  if (e.value >= p_void.size()) throw Error("unknown state " + std::to_string(e.value));
  if (p_void[e.value] >= 0.0) {
    // Only a strict void winner is solved; a tied row may still need preparing.
    const auto p = net.behaviour_probabilities(model.skill(), model.sensing(), e);
    if (std::count(p.begin(), p.end(), p_void[e.value]) == 1) return std::nullopt;
  }

  const auto& behaviours = net.skill(model.skill()).behaviours;
  const TransitionTable table(model, behaviours);
  CompoundSearch search{table, p_void, p_void_max, e, {}, {}, {}};
  for (std::size_t len = 2; len + 1 <= params.l_max; ++len) search.search(e, 1.0, len);
  if (search.best_path.empty()) return std::nullopt;

  CompoundProposal proposal;
  for (std::size_t k : search.best_path) proposal.path.push_back(behaviours[k]);
  proposal.origin = e;
  proposal.target = search.best_target;
  proposal.curiosity = search.best;
  return proposal;
}

double acceptance_probability(double curiosity, double gamma, double delta) {
  return 1.0 / (1.0 + std::exp(-(gamma * curiosity + delta)));
}

std::optional<BehaviourId> insert_compound_playing(PlayingNet& net, SkillId skill, SensingActionId s,
                                                   const CompoundProposal& proposal, double h_init) {
  if (proposal.path.size() < 2) throw Error("compound behaviours need at least two constituents");
  if (net.find_compound(skill, proposal.path)) return std::nullopt;

  Behaviour b;
  b.kind = BehaviourKind::compound;
  b.sequence = proposal.path;
  b.grasp_outcome = Grasp::neutral;
  for (BehaviourId part : proposal.path) {
    const auto& pb = net.behaviour(part);
    if (!b.name.empty()) b.name += "+";
    b.name += pb.name;
    if (pb.grasp_outcome != Grasp::neutral) b.grasp_outcome = pb.grasp_outcome;
  }
  const BehaviourId id = net.add_behaviour(std::move(b));
  net.attach_behaviour(skill, id, h_init);
  net.set_state_weight(skill, s, proposal.origin, id, h_init * (1.0 + proposal.curiosity));
  return id;
}

void insert_compound_env(std::span<ForwardModel* const> models, BehaviourId compound,
                         const CompoundProposal& proposal, SensingActionId current) {
  for (ForwardModel* m : models) {
    if (m->sensing() != current) {
      m->ensure_pair_clips(compound);
      continue;
    }
    // Weakest link of the greedy chain, read before the new clips exist.
    double h_min = std::numeric_limits<double>::infinity();
    StateId e = proposal.origin;
    for (BehaviourId b : proposal.path) {
      const StateId next = successor(*m, e, b);
      h_min = std::min(h_min, m->weight(e, b, next));
      e = next;
    }
    m->ensure_pair_clips(compound);
    m->set_weight(proposal.origin, compound, e, h_min);
  }
}

}  // namespace playlearn
