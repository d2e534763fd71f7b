#include "playlearn/ps_core.hpp"

#include <algorithm>

namespace playlearn {

namespace {

auto edge_less = [](const ClipNetwork::Edge& e, ClipId id) { return e.to < id; };

double update_rule(double h, double zeta, double reward) {
  return std::max(1.0, h - zeta * (h - 1.0) + reward);
}

}  // namespace

ClipId ClipNetwork::add_clip(std::string label) {
  clips_.push_back(Clip{std::move(label), {}});
  return ClipId{static_cast<std::uint32_t>(clips_.size() - 1)};
}

ClipNetwork::Clip& ClipNetwork::at(ClipId c) {
  if (!contains(c)) throw Error("missing clip " + std::to_string(c.value));
  return clips_[c.value];
}

const ClipNetwork::Clip& ClipNetwork::at(ClipId c) const {
  if (!contains(c)) throw Error("missing clip " + std::to_string(c.value));
  return clips_[c.value];
}

double* ClipNetwork::find_weight(ClipId from, ClipId to) {
  auto& out = at(from).out;
  auto it = std::lower_bound(out.begin(), out.end(), to, edge_less);
  if (it == out.end() || it->to != to) return nullptr;
  return &it->h;
}

void ClipNetwork::connect(ClipId from, ClipId to, double h) {
  if (!contains(from) || !contains(to)) throw Error("missing clip");
  if (!(h > 0.0)) throw Error("nonpositive weight");
  auto& out = clips_[from.value].out;
  auto it = std::lower_bound(out.begin(), out.end(), to, edge_less);
  if (it != out.end() && it->to == to) {
    if (it->h < 1.0) --below_floor_;
    it->h = h;
  } else {
    out.insert(it, Edge{to, h});
    ++edge_count_;
  }
  if (h < 1.0) ++below_floor_;
}

bool ClipNetwork::has_edge(ClipId from, ClipId to) const {
  if (!contains(from)) return false;
  const auto& out = clips_[from.value].out;
  auto it = std::lower_bound(out.begin(), out.end(), to, edge_less);
  return it != out.end() && it->to == to;
}

double ClipNetwork::weight(ClipId from, ClipId to) const {
  const auto& out = at(from).out;
  auto it = std::lower_bound(out.begin(), out.end(), to, edge_less);
  if (it == out.end() || it->to != to) throw Error("missing edge");
  return it->h;
}

std::span<const ClipNetwork::Edge> ClipNetwork::out_edges(ClipId from) const {
  return at(from).out;
}

const std::string& ClipNetwork::label(ClipId c) const { return at(c).label; }

std::vector<std::pair<ClipId, double>> ClipNetwork::transition_probabilities(ClipId from) const {
  const auto& out = at(from).out;
  if (out.empty()) throw Error("terminal clip " + std::to_string(from.value));
  double total = 0.0;
  for (const auto& e : out) total += e.h;
  std::vector<std::pair<ClipId, double>> probs;
  probs.reserve(out.size());
  for (const auto& e : out) probs.emplace_back(e.to, e.h / total);
  return probs;
}

ClipId ClipNetwork::sample_next(ClipId from, Rng& rng) const {
  const auto& out = at(from).out;
  if (out.empty()) throw Error("terminal clip " + std::to_string(from.value));
  double total = 0.0;
  for (const auto& e : out) total += e.h;
  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (const auto& e : out) {
    acc += e.h;
    if (u < acc) return e.to;
  }
  // u lands at total only through rounding.
  return out.back().to;
}

void ClipNetwork::reinforce(std::span<const EdgeRef> rewarded, double reward, double zeta) {
  std::vector<double*> targets;
  targets.reserve(rewarded.size());
  for (const auto& e : rewarded) {
    double* h = contains(e.from) && contains(e.to) ? find_weight(e.from, e.to) : nullptr;
    if (h == nullptr) {
      throw Error("broken path at " + std::to_string(e.from.value) + "->" + std::to_string(e.to.value));
    }
    if (std::find(targets.begin(), targets.end(), h) == targets.end()) targets.push_back(h);
  }

  auto set = [this](double& h, double value) {
    if (h < 1.0) --below_floor_;
    h = value;
  };

  if (zeta != 0.0 || below_floor_ > 0) {
    // Forgetting and the floor touch every weight; rewarded ones get r afterwards.
    for (auto& clip : clips_) {
      for (auto& e : clip.out) {
        const bool on_path = std::find(targets.begin(), targets.end(), &e.h) != targets.end();
        set(e.h, update_rule(e.h, zeta, on_path ? reward : 0.0));
      }
    }
    return;
  }
  for (double* h : targets) set(*h, update_rule(*h, 0.0, reward));
}

void ClipNetwork::reinforce_path(const WalkPath& path, double reward, double zeta) {
  std::vector<EdgeRef> edges;
  for (std::size_t i = 1; i < path.size(); ++i) edges.push_back({path[i - 1], path[i]});
  reinforce(edges, reward, zeta);
}

}  // namespace playlearn
