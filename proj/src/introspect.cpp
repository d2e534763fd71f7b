#include "playlearn/introspect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "playlearn/error.hpp"
#include "playlearn/skill_net.hpp"

namespace playlearn {

double normalized_entropy(std::span<const double> probabilities) {
  if (probabilities.size() < 2) throw Error("degenerate behaviour set: entropy needs at least two outcomes");
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  const double value = h / std::log2(static_cast<double>(probabilities.size()));
  return std::clamp(value, 0.0, 1.0);
}

double normalized_policy_entropy(const PlayingNet& net, SkillId skill, SensingActionId s, StateId e) {
  const auto p = net.behaviour_probabilities(skill, s, e);
  if (p.size() < 2) throw Error("degenerate behaviour set");
  return normalized_entropy(p);
}

double boredom_probability(double entropy, double beta) {
  if (!(entropy >= 0.0 && entropy <= 1.0)) throw Error("entropy outside [0,1]");
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error("boredom immunity outside [0,1]");
  return 1.0 - beta * entropy;
}

double single_transition_confidence(const ForwardModel& model, StateId e, BehaviourId b) {
  if (model.state_count() < 2) throw Error("transition confidence needs at least two states");
  return 1.0 - normalized_entropy(model.predict(e, b));
}

StateId successor(const ForwardModel& model, StateId e, BehaviourId b) {
  const auto p = model.predict(e, b);
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] > p[best]) best = i;
  }
  return StateId{static_cast<std::uint32_t>(best)};
}

double path_confidence(const ForwardModel& model, StateId e, std::span<const BehaviourId> path) {
  if (path.empty()) throw Error("empty behaviour path");
  double nu = 1.0;
  for (BehaviourId b : path) {
    nu *= single_transition_confidence(model, e, b);
    e = successor(model, e, b);
  }
  return nu;
}

StateId path_successor(const ForwardModel& model, StateId e, std::span<const BehaviourId> path) {
  for (BehaviourId b : path) e = successor(model, e, b);
  return e;
}

std::size_t candidate_count(std::size_t j, std::size_t l_max) {
  std::size_t total = 0;
  std::size_t layer = 1;
  for (std::size_t len = 1; len + 1 <= l_max; ++len) {
    layer *= j;
    total += layer;
  }
  return total;
}

TransitionTable::TransitionTable(const ForwardModel& model, std::span<const BehaviourId> bs)
    : behaviours(bs.begin(), bs.end()), states(model.state_count()) {
  const std::size_t j = behaviours.size();
  next.resize(states * j);
  confidence.resize(states * j);
  next_weight.resize(states * j);
  for (std::uint32_t e = 0; e < states; ++e) {
    for (std::size_t k = 0; k < j; ++k) {
      const StateId se{e};
      const std::size_t i = at(se, k);
      next[i] = successor(model, se, behaviours[k]);
      confidence[i] = single_transition_confidence(model, se, behaviours[k]);
      next_weight[i] = model.weight(se, behaviours[k], next[i]);
    }
  }
}

namespace {

struct PlanSearch {
  const TransitionTable& table;
  const std::vector<double>& interest;  // normalised policy entropy per state
  double interest_max;
  double epsilon;

  std::vector<std::size_t> prefix;
  std::vector<std::size_t> best_path;
  StateId best_target{};
  double best = -std::numeric_limits<double>::infinity();

  // Depth-first over sequences of exactly `length` behaviours, lexicographic order.
  void search(StateId e, double nu, std::size_t length) {
    if (prefix.size() == length) {
      const double score = interest[e.value] * nu + epsilon / static_cast<double>(length);
      if (score > best) {
        best = score;
        best_path = prefix;
        best_target = e;
      }
      return;
    }
    if (nu * interest_max + epsilon / static_cast<double>(length) < best - 1e-12) return;
    for (std::size_t k = 0; k < table.behaviours.size(); ++k) {
      const std::size_t i = table.at(e, k);
      prefix.push_back(k);
      search(table.next[i], nu * table.confidence[i], length);
      prefix.pop_back();
    }
  }
};

}  // namespace

std::optional<TransitionPlan> plan_desirable_transition(const PlayingNet& net, const ForwardModel& model,
                                                        StateId e, const IntrospectParams& params) {
  if (model.state_count() < 2 || params.l_max < 2) return std::nullopt;
  const auto& behaviours = net.skill(model.skill()).behaviours;
  if (behaviours.empty()) return std::nullopt;
  const TransitionTable table(model, behaviours);

  std::vector<double> interest(model.state_count());
  double interest_max = 0.0;
  for (std::uint32_t st = 0; st < interest.size(); ++st) {
    interest[st] = behaviours.size() >= 2 ? normalized_policy_entropy(net, model.skill(), model.sensing(), StateId{st})
                                          : 0.0;
    interest_max = std::max(interest_max, interest[st]);
  }

  PlanSearch search{table, interest, interest_max, params.epsilon, {}, {}, {}};
  for (std::size_t len = 1; len + 1 <= params.l_max; ++len) search.search(e, 1.0, len);

  TransitionPlan plan;
  for (std::size_t k : search.best_path) plan.path.push_back(behaviours[k]);
  plan.target = search.best_target;
  plan.desirability = search.best;
  return plan;
}

}  // namespace playlearn
