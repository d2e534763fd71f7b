#ifndef PLAYLEARN_IDS_HPP
#define PLAYLEARN_IDS_HPP

#include <compare>
#include <cstdint>

namespace playlearn {

template <typename Tag>
struct StrongId {
  std::uint32_t value = 0;
  friend auto operator<=>(StrongId, StrongId) = default;
};

using SkillId = StrongId<struct SkillTag>;
using BehaviourId = StrongId<struct BehaviourTag>;
// Index of a sensing action in the world definition.
using SensingActionId = StrongId<struct SensingTag>;
// Perceptual state index, scoped to one (skill, sensing action) pair.
using StateId = StrongId<struct StateTag>;

}  // namespace playlearn

#endif  // PLAYLEARN_IDS_HPP
