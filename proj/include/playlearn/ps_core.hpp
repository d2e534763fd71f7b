#ifndef PLAYLEARN_PS_CORE_HPP
#define PLAYLEARN_PS_CORE_HPP

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "playlearn/error.hpp"
#include "playlearn/rng.hpp"

namespace playlearn {

struct ClipId {
  std::uint32_t value = 0;
  friend auto operator<=>(ClipId, ClipId) = default;
};

/// A directed hop between two clips.
struct EdgeRef {
  ClipId from;
  ClipId to;
};

/// Ordered clip sequence; consecutive pairs must be edges of the network.
using WalkPath = std::vector<ClipId>;

/// Weighted directed clip graph of a projective-simulation agent.
///
/// Outgoing edges of a clip are kept sorted by target id, which fixes the
/// cumulative-interval layout used by sample_next.
class ClipNetwork {
 public:
  struct Edge {
    ClipId to;
    double h;
  };

  ClipId add_clip(std::string label = {});

  /// Sets (or overwrites) the weight of from -> to.
  void connect(ClipId from, ClipId to, double h);

  [[nodiscard]] bool contains(ClipId c) const { return c.value < clips_.size(); }
  [[nodiscard]] bool has_edge(ClipId from, ClipId to) const;
  [[nodiscard]] double weight(ClipId from, ClipId to) const;
  [[nodiscard]] std::span<const Edge> out_edges(ClipId from) const;
  [[nodiscard]] const std::string& label(ClipId c) const;
  [[nodiscard]] std::size_t clip_count() const { return clips_.size(); }
  [[nodiscard]] std::size_t edge_count() const { return edge_count_; }

  /// p(from -> to) = h / sum(h) for every child, ascending by child id.
  [[nodiscard]] std::vector<std::pair<ClipId, double>> transition_probabilities(ClipId from) const;

  [[nodiscard]] ClipId sample_next(ClipId from, Rng& rng) const;

  /// h <- max(1, h - zeta (h - 1) + rho r) on every edge of the network,
  /// rho = 1 exactly for the listed edges.
  void reinforce(std::span<const EdgeRef> rewarded, double reward, double zeta);
  void reinforce_path(const WalkPath& path, double reward, double zeta);

 private:
  struct Clip {
    std::string label;
    std::vector<Edge> out;
  };

  Clip& at(ClipId c);
  const Clip& at(ClipId c) const;
  double* find_weight(ClipId from, ClipId to);

  std::vector<Clip> clips_;
  std::size_t edge_count_ = 0;
  // Number of weights below the update floor; lets zeta == 0 skip the sweep.
  std::size_t below_floor_ = 0;
};

}  // namespace playlearn

#endif  // PLAYLEARN_PS_CORE_HPP
