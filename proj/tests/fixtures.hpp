#ifndef PLAYLEARN_TESTS_FIXTURES_HPP
#define PLAYLEARN_TESTS_FIXTURES_HPP

#include <string>
#include <vector>

#include "playlearn/skill_net.hpp"

namespace fixtures {

// Agent with one skill: behaviour 0 is void, one sensing action with `states` percepts.
struct Bench {
  playlearn::Agent agent;
  playlearn::SkillId skill;
  std::vector<playlearn::BehaviourId> bs;
  playlearn::SensingActionId s{0};

  Bench(std::size_t behaviours, std::size_t states, playlearn::Params p = {}) : agent(p) {
    playlearn::SkillRegistration reg;
    reg.name = "task";
    for (std::size_t i = 0; i < behaviours; ++i) {
      bs.push_back(agent.add_atomic_behaviour(i == 0 ? "void" : "b" + std::to_string(i), i,
                                              playlearn::Grasp::neutral, i == 0));
    }
    reg.behaviours = bs;
    reg.sensing.push_back({s, states, 1.0, playlearn::Grasp::neutral});
    skill = agent.register_skill(reg);
  }

  playlearn::PlayingNet& net() { return agent.net(); }
  playlearn::ForwardModel& model() { return agent.model(skill, s); }
  void set(std::uint32_t e, std::size_t k, double h) {
    net().set_state_weight(skill, s, playlearn::StateId{e}, bs[k], h);
  }
  void observe(std::uint32_t e, std::size_t k, std::uint32_t after, int times = 1) {
    for (int i = 0; i < times; ++i) {
      model().observe_transition(playlearn::StateId{e}, bs[k], playlearn::StateId{after}, agent.params().r_env);
    }
  }
};

}  // namespace fixtures

#endif  // PLAYLEARN_TESTS_FIXTURES_HPP
