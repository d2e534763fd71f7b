#include "playlearn/skill_net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "playlearn/creativity.hpp"
#include "playlearn/error.hpp"
#include "playlearn/introspect.hpp"

namespace playlearn {

namespace {

constexpr std::uint32_t kNoBehaviour = std::numeric_limits<std::uint32_t>::max();
constexpr int kMaxSkillDepth = 8;

bool grasp_compatible(Grasp outcome, Grasp requirement) {
  return requirement == Grasp::neutral || outcome == Grasp::neutral || outcome == requirement;
}

}  // namespace

// ---------------------------------------------------------------- PlayingNet

BehaviourId PlayingNet::add_behaviour(Behaviour b) {
  b.id = BehaviourId{static_cast<std::uint32_t>(behaviours_.size())};
  const ClipId clip = network_.add_clip(b.name);
  if (clip_behaviour_.size() <= clip.value) clip_behaviour_.resize(clip.value + 1, kNoBehaviour);
  clip_behaviour_[clip.value] = b.id.value;
  behaviour_clips_.push_back(clip);
  behaviours_.push_back(std::move(b));
  return behaviours_.back().id;
}

const Behaviour& PlayingNet::behaviour(BehaviourId id) const {
  if (id.value >= behaviours_.size()) throw Error("unknown behaviour " + std::to_string(id.value));
  return behaviours_[id.value];
}

SkillId PlayingNet::add_skill(SkillLayer layer) {
  layer.id = SkillId{static_cast<std::uint32_t>(skills_.size())};
  skills_.push_back(std::move(layer));
  return skills_.back().id;
}

const PlayingNet::SkillLayer& PlayingNet::skill(SkillId id) const {
  if (id.value >= skills_.size()) throw Error("unregistered skill " + std::to_string(id.value));
  return skills_[id.value];
}

const PlayingNet::SensingLayer& PlayingNet::sensing_layer(SkillId skill_id, SensingActionId s) const {
  for (const auto& layer : skill(skill_id).sensing) {
    if (layer.id == s) return layer;
  }
  throw Error("sensing action " + std::to_string(s.value) + " not available to skill");
}

ClipId PlayingNet::state_clip(SkillId skill_id, SensingActionId s, StateId e) const {
  const auto& layer = sensing_layer(skill_id, s);
  if (e.value >= layer.states.size()) throw Error("unknown state " + std::to_string(e.value));
  return layer.states[e.value];
}

ClipId PlayingNet::behaviour_clip(BehaviourId b) const {
  if (b.value >= behaviour_clips_.size()) throw Error("unknown behaviour " + std::to_string(b.value));
  return behaviour_clips_[b.value];
}

BehaviourId PlayingNet::behaviour_at(ClipId clip) const {
  if (clip.value >= clip_behaviour_.size() || clip_behaviour_[clip.value] == kNoBehaviour) {
    throw Error("clip " + std::to_string(clip.value) + " is not a behaviour");
  }
  return BehaviourId{clip_behaviour_[clip.value]};
}

SensingActionId PlayingNet::sensing_at(SkillId skill_id, ClipId clip) const {
  for (const auto& layer : skill(skill_id).sensing) {
    if (layer.clip == clip) return layer.id;
  }
  throw Error("clip " + std::to_string(clip.value) + " is not a sensing action of the skill");
}

void PlayingNet::attach_behaviour(SkillId skill_id, BehaviourId b, double h) {
  auto& layer = skills_.at(skill_id.value);
  const ClipId bc = behaviour_clip(b);
  if (!has_behaviour(skill_id, b)) {
    layer.behaviours.insert(std::upper_bound(layer.behaviours.begin(), layer.behaviours.end(), b), b);
  }
  for (const auto& s : layer.sensing) {
    for (ClipId st : s.states) network_.connect(st, bc, h);
  }
}

bool PlayingNet::has_behaviour(SkillId skill_id, BehaviourId b) const {
  const auto& bs = skill(skill_id).behaviours;
  return std::binary_search(bs.begin(), bs.end(), b);
}

std::optional<BehaviourId> PlayingNet::void_behaviour(SkillId skill_id) const {
  for (BehaviourId b : skill(skill_id).behaviours) {
    if (behaviours_[b.value].kind == BehaviourKind::void_behaviour) return b;
  }
  return std::nullopt;
}

std::optional<BehaviourId> PlayingNet::find_compound(SkillId skill_id, std::span<const BehaviourId> seq) const {
  for (BehaviourId b : skill(skill_id).behaviours) {
    const auto& beh = behaviours_[b.value];
    if (beh.kind == BehaviourKind::compound && std::ranges::equal(beh.sequence, seq)) return b;
  }
  return std::nullopt;
}

std::vector<double> PlayingNet::behaviour_probabilities(SkillId skill_id, SensingActionId s, StateId e) const {
  const auto& layer = skill(skill_id);
  const auto edges = network_.out_edges(state_clip(skill_id, s, e));
  double total = 0.0;
  for (const auto& edge : edges) total += edge.h;
  // Behaviour clips are created in id order, so edge order matches layer.behaviours.
  std::vector<double> p;
  p.reserve(layer.behaviours.size());
  for (const auto& edge : edges) p.push_back(edge.h / total);
  return p;
}

double PlayingNet::state_weight(SkillId skill_id, SensingActionId s, StateId e, BehaviourId b) const {
  return network_.weight(state_clip(skill_id, s, e), behaviour_clip(b));
}

void PlayingNet::set_state_weight(SkillId skill_id, SensingActionId s, StateId e, BehaviourId b, double h) {
  network_.connect(state_clip(skill_id, s, e), behaviour_clip(b), h);
}

// ---------------------------------------------------------------- Agent

Agent::Agent(Params params) : params_(params) { params_.validate(); }

BehaviourId Agent::add_atomic_behaviour(std::string name, std::size_t world_behaviour, Grasp grasp, bool is_void) {
  Behaviour b;
  b.name = std::move(name);
  b.kind = is_void ? BehaviourKind::void_behaviour : BehaviourKind::atomic;
  b.world_behaviour = world_behaviour;
  b.grasp_outcome = grasp;
  return net_.add_behaviour(std::move(b));
}

BehaviourId Agent::wrap_world_behaviour(const WorldSpec& spec, std::size_t world_behaviour) {
  if (world_behaviour >= spec.behaviours.size()) throw Error("unknown world behaviour");
  if (world_wrappers_.size() <= world_behaviour) world_wrappers_.resize(world_behaviour + 1);
  auto& slot = world_wrappers_[world_behaviour];
  if (!slot) {
    const auto& wb = spec.behaviours[world_behaviour];
    slot = add_atomic_behaviour(wb.name, world_behaviour, wb.grasp, wb.name == "void");
  }
  return *slot;
}

SkillId Agent::register_skill(const SkillRegistration& reg) {
  bool has_void = false;
  for (BehaviourId b : reg.behaviours) {
    if (net_.behaviour(b).kind == BehaviourKind::void_behaviour) has_void = true;
  }
  if (!has_void) throw Error("skill '" + reg.name + "' has no void behaviour");

  PlayingNet::SkillLayer layer;
  layer.name = reg.name;
  layer.world_skill = reg.world_skill;
  layer.clip = net_.network().add_clip("skill:" + reg.name);
  for (const auto& s : reg.sensing) {
    if (s.accuracy < 0.0 || s.accuracy > 1.0) throw Error("sensing accuracy outside [0,1]");
    if (s.state_count == 0) throw Error("sensing action without perceptual states");
    // A skill whose basic behaviour needs a grasped object may only use grasp-checking sensors.
    const bool usable = reg.requires_grasp ? s.grasp_requirement == Grasp::grasped
                                           : s.grasp_requirement != Grasp::grasped;
    if (!usable) continue;
    PlayingNet::SensingLayer sl;
    sl.id = s.id;
    sl.grasp_requirement = s.grasp_requirement;
    sl.accuracy = s.accuracy;
    sl.clip = net_.network().add_clip("sensing:" + std::to_string(s.id.value));
    for (std::size_t e = 0; e < s.state_count; ++e) {
      sl.states.push_back(net_.network().add_clip("state:" + std::to_string(s.id.value) + ":" + std::to_string(e)));
    }
    net_.network().connect(layer.clip, sl.clip, std::exp(params_.alpha * s.accuracy));
    layer.sensing.push_back(std::move(sl));
  }
  if (layer.sensing.empty()) throw Error("skill '" + reg.name + "' has no usable sensing action");

  const SkillId id = net_.add_skill(std::move(layer));
  for (BehaviourId b : reg.behaviours) net_.attach_behaviour(id, b, params_.h_init);

  std::vector<std::size_t> indices;
  for (const auto& sl : net_.skill(id).sensing) {
    indices.push_back(models_.size());
    models_.emplace_back(id, sl.id, sl.states.size(), params_.h_init_env);
    for (BehaviourId b : net_.skill(id).behaviours) models_.back().ensure_pair_clips(b);
  }
  model_index_.push_back(std::move(indices));
  rewards_.emplace_back();
  promoted_.emplace_back();
  return id;
}

SkillId Agent::register_world_skill(const WorldSpec& spec, std::size_t world_skill) {
  const auto& ws = spec.skills.at(world_skill);
  SkillRegistration reg;
  reg.name = ws.name;
  reg.world_skill = world_skill;
  reg.requires_grasp = ws.requires_grasp;
  for (std::size_t s = 0; s < spec.sensing.size(); ++s) {
    reg.sensing.push_back({SensingActionId{static_cast<std::uint32_t>(s)}, spec.sensing[s].percept_count(),
                           calibrate_sensing_accuracy(spec, s), spec.sensing[s].grasp_requirement});
  }
  for (std::size_t b : ws.preparatory) reg.behaviours.push_back(wrap_world_behaviour(spec, b));
  std::sort(reg.behaviours.begin(), reg.behaviours.end());
  return register_skill(reg);
}

ForwardModel& Agent::model(SkillId skill, SensingActionId s) {
  const auto& layer = net_.skill(skill);
  for (std::size_t i = 0; i < layer.sensing.size(); ++i) {
    if (layer.sensing[i].id == s) return models_[model_index_[skill.value][i]];
  }
  throw Error("no forward model for sensing action " + std::to_string(s.value));
}

const ForwardModel& Agent::model(SkillId skill, SensingActionId s) const {
  return const_cast<Agent*>(this)->model(skill, s);
}

std::vector<ForwardModel*> Agent::models_of(SkillId skill) {
  (void)net_.skill(skill);  // validates the id
  std::vector<ForwardModel*> out;
  for (std::size_t i : model_index_[skill.value]) out.push_back(&models_[i]);
  return out;
}

void Agent::add_behaviour_to_models(SkillId skill, BehaviourId b) {
  for (ForwardModel* m : models_of(skill)) m->ensure_pair_clips(b);
}

void Agent::record_reward(SkillId skill, double reward) {
  (void)net_.skill(skill);  // validates the id
  auto& hist = rewards_[skill.value];
  hist.push_back(reward);
  while (hist.size() > params_.t_thresh) hist.pop_front();
}

bool Agent::is_well_trained(SkillId skill) const {
  (void)net_.skill(skill);  // validates the id
  const auto& hist = rewards_[skill.value];
  if (hist.size() < params_.t_thresh || hist.empty()) return false;
  const double mean = std::accumulate(hist.begin(), hist.end(), 0.0) / static_cast<double>(hist.size());
  return mean >= params_.r_thresh;
}

std::optional<BehaviourId> Agent::promoted_behaviour(SkillId skill) const {
  (void)net_.skill(skill);  // validates the id
  return promoted_[skill.value];
}

void Agent::promote_to_behaviour(SkillId skill, std::span<const SkillId> targets) {
  for (SkillId t : targets) {
    if (t == skill) throw Error("self-reference: a skill cannot prepare itself");
    (void)net_.skill(t);  // validates the id
  }
  if (!is_well_trained(skill)) throw Error("skill '" + net_.skill(skill).name + "' is not well-trained");
  auto& slot = promoted_[skill.value];
  if (!slot) {
    Behaviour b;
    b.name = "skill:" + net_.skill(skill).name;
    b.kind = BehaviourKind::skill;
    b.skill = skill;
    slot = net_.add_behaviour(std::move(b));
  }
  for (SkillId t : targets) {
    if (net_.has_behaviour(t, *slot)) continue;
    net_.attach_behaviour(t, *slot, params_.h_init);
    add_behaviour_to_models(t, *slot);
  }
}

std::vector<BehaviourId> Agent::flatten(BehaviourId b) const {
  const auto& beh = net_.behaviour(b);
  if (beh.kind != BehaviourKind::compound) return {b};
  std::vector<BehaviourId> out;
  for (BehaviourId part : beh.sequence) {
    auto sub = flatten(part);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

void Agent::execute_behaviour(BehaviourId b, WorldInstance& world, Rng& rng, int depth) {
  const auto& beh = net_.behaviour(b);
  switch (beh.kind) {
    case BehaviourKind::atomic:
    case BehaviourKind::void_behaviour:
      world.apply_behaviour(beh.world_behaviour);
      return;
    case BehaviourKind::compound:
      for (BehaviourId part : beh.sequence) execute_behaviour(part, world, rng, depth);
      return;
    case BehaviourKind::skill:
      run_skill_policy(beh.skill, world, rng, depth + 1);
      return;
  }
}

// Executes a trained skill as a preparatory behaviour of another skill: one
// walk through its network and its basic behaviour, without learning.
void Agent::run_skill_policy(SkillId skill, WorldInstance& world, Rng& rng, int depth) {
  if (depth > kMaxSkillDepth) throw Error("skill hierarchy too deep");
  const auto& layer = net_.skill(skill);
  const ClipId sensing_clip = net_.network().sample_next(layer.clip, rng);
  const SensingActionId s = net_.sensing_at(skill, sensing_clip);
  const StateId e{static_cast<std::uint32_t>(world.sense(s.value))};
  const BehaviourId b = net_.behaviour_at(net_.network().sample_next(net_.state_clip(skill, s, e), rng));
  execute_behaviour(b, world, rng, depth);
  (void)world.evaluate_success(layer.world_skill);
}

RolloutRecord Agent::execute_rollout(SkillId skill, WorldInstance& world, RolloutOptions options, Rng& rng) {
  const auto& layer = net_.skill(skill);
  const ClipId skill_clip = layer.clip;
  const std::size_t world_skill = layer.world_skill;

  RolloutRecord rec;
  rec.skill = skill;
  rec.start_latent = world.latent();

  bool boredom = options.boredom;
  ClipId sensing_clip;
  SensingActionId s;
  StateId e;
  for (;;) {
    ++rec.sensing_phases;
    sensing_clip = net_.network().sample_next(skill_clip, rng);
    s = net_.sensing_at(skill, sensing_clip);
    e = StateId{static_cast<std::uint32_t>(world.sense(s.value))};

    if (boredom && net_.skill(skill).behaviours.size() >= 2) {
      const double h = normalized_policy_entropy(net_, skill, s, e);
      if (rng.bernoulli(boredom_probability(h, params_.beta))) {
        rec.bored = true;
        // Boredom fires at most once per rollout.
        boredom = false;
        const auto plan = plan_desirable_transition(net_, model(skill, s), e,
                                                    IntrospectParams{params_.beta, params_.epsilon, params_.l_max});
        if (plan) {
          for (BehaviourId b : plan->path) execute_behaviour(b, world, rng);
        }
        continue;
      }
    }
    break;
  }

  if (options.creativity) {
    const auto proposal = propose_compound(net_, model(skill, s), e,
                                           CreativityParams{params_.gamma, params_.delta, params_.l_max});
    if (proposal && rng.bernoulli(acceptance_probability(proposal->curiosity, params_.gamma, params_.delta))) {
      if (auto b = insert_compound_playing(net_, skill, s, *proposal, params_.h_init)) {
        auto models = models_of(skill);
        insert_compound_env(models, *b, *proposal, s);
        rec.creative = true;
      }
    }
  }

  const ClipId state_clip = net_.state_clip(skill, s, e);
  const ClipId behaviour_clip = net_.network().sample_next(state_clip, rng);
  const BehaviourId b = net_.behaviour_at(behaviour_clip);
  execute_behaviour(b, world, rng);

  const auto& beh = net_.behaviour(b);
  const auto& sl = net_.sensing_layer(skill, s);
  Grasp outcome = beh.grasp_outcome;
  if (beh.kind == BehaviourKind::compound) {
    for (BehaviourId part : flatten(b)) {
      if (net_.behaviour(part).grasp_outcome != Grasp::neutral) outcome = net_.behaviour(part).grasp_outcome;
    }
  }
  if (grasp_compatible(outcome, sl.grasp_requirement)) {
    const StateId after{static_cast<std::uint32_t>(world.sense(s.value))};
    rec.prepared_state = after;
    model(skill, s).observe_transition(e, b, after, params_.r_env, params_.zeta_env);
  }

  rec.success = world.evaluate_success(world_skill);
  rec.reward = rec.success ? params_.r_success : params_.r_failure;
  rec.sensing = s;
  rec.estimated_state = e;
  rec.behaviour = b;

  const EdgeRef walked[] = {{skill_clip, sensing_clip}, {state_clip, behaviour_clip}};
  net_.network().reinforce(walked, rec.reward, params_.zeta);
  record_reward(skill, rec.reward);

  if (auto_promote && !promoted_[skill.value] && net_.skill_count() > 1 && is_well_trained(skill)) {
    std::vector<SkillId> targets;
    for (std::uint32_t t = 0; t < net_.skill_count(); ++t) {
      if (t != skill.value) targets.push_back(SkillId{t});
    }
    promote_to_behaviour(skill, targets);
  }
  return rec;
}

}  // namespace playlearn
