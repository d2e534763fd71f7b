#include <doctest.h>

#include <cmath>
#include <memory>

#include "fixtures.hpp"
#include "playlearn/error.hpp"
#include "playlearn/rng.hpp"
#include "playlearn/skill_net.hpp"
#include "playlearn/worlds.hpp"

using namespace playlearn;

namespace {

struct BookBench {
  std::shared_ptr<const WorldSpec> spec;
  Agent agent;
  SkillId skill;
  SensingActionId slide;

  BookBench()
      : spec(std::make_shared<const WorldSpec>(make_book_world({0, true, 1.0, 1.0, 1.0}))),
        skill(agent.register_world_skill(*spec, 0)),
        slide{static_cast<std::uint32_t>(spec->sensing_index("slide"))} {}

  BehaviourId named(const std::string& name) const {
    for (BehaviourId b : agent.net().skill(skill).behaviours) {
      if (agent.net().behaviour(b).name == name) return b;
    }
    FAIL("no behaviour " << name);
    return {};
  }
};

}  // namespace

TEST_SUITE("skill_net") {

TEST_CASE("registration weights") {
  BookBench bb;
  const auto& net = bb.agent.net();
  const auto& layer = net.skill(bb.skill);
  CHECK(layer.sensing.size() == 4);
  for (const auto& sl : layer.sensing) {
    const double d = net.network().weight(layer.clip, sl.clip);
    CHECK(d == doctest::Approx(std::exp(25.0 * sl.accuracy)));
    for (std::uint32_t e = 0; e < sl.states.size(); ++e) {
      for (BehaviourId b : layer.behaviours) CHECK(net.state_weight(bb.skill, sl.id, StateId{e}, b) == 200.0);
    }
  }
  const auto none = SensingActionId{static_cast<std::uint32_t>(bb.spec->sensing_index("none"))};
  CHECK(net.network().weight(layer.clip, net.sensing_layer(bb.skill, none).clip) ==
        doctest::Approx(2.68337e5).epsilon(1e-5));
  CHECK(net.network().weight(layer.clip, net.sensing_layer(bb.skill, bb.slide).clip) ==
        doctest::Approx(7.20049e10).epsilon(1e-5));
  CHECK(net.void_behaviour(bb.skill).has_value());
}

TEST_CASE("a skill without void is rejected") {
  Agent a;
  SkillRegistration reg;
  reg.name = "x";
  reg.behaviours = {a.add_atomic_behaviour("push", 0, Grasp::neutral)};
  reg.sensing.push_back({SensingActionId{0}, 2, 1.0, Grasp::neutral});
  CHECK_THROWS_AS(a.register_skill(reg), Error);
}

TEST_CASE("rollout: void at 0 degrees succeeds") {
  BookBench bb;
  bb.agent.net().set_state_weight(bb.skill, bb.slide, StateId{0}, bb.named("void"), 1e15);
  WorldInstance w(bb.spec, 1);
  Rng rng(2);
  w.reset(0);
  const auto rec = bb.agent.execute_rollout(bb.skill, w, {}, rng);
  CHECK(rec.sensing == bb.slide);
  CHECK(rec.behaviour == bb.named("void"));
  CHECK(rec.success);
  CHECK(rec.reward == 1000.0);
  CHECK(bb.agent.net().state_weight(bb.skill, bb.slide, StateId{0}, bb.named("void")) == 1e15 + 1000);
}

TEST_CASE("rollout: rotate90 at 90 degrees succeeds and trains the model") {
  BookBench bb;
  const auto rot = bb.named("rotate90");
  bb.agent.net().set_state_weight(bb.skill, bb.slide, StateId{1}, rot, 1e15);
  WorldInstance w(bb.spec, 1);
  Rng rng(2);
  w.reset(1);
  const auto rec = bb.agent.execute_rollout(bb.skill, w, {}, rng);
  CHECK(rec.success);
  REQUIRE(rec.prepared_state);
  CHECK(*rec.prepared_state == StateId{0});
  CHECK(bb.agent.model(bb.skill, bb.slide).predict(StateId{1}, rot)[0] == doctest::Approx(11.0 / 14.0));
}

TEST_CASE("rollout: failure is punished") {
  BookBench bb;
  const auto flip = bb.named("flip");
  bb.agent.net().set_state_weight(bb.skill, bb.slide, StateId{2}, flip, 1e15);
  WorldInstance w(bb.spec, 1);
  Rng rng(2);
  w.reset(2);
  const auto rec = bb.agent.execute_rollout(bb.skill, w, {}, rng);
  CHECK_FALSE(rec.success);
  CHECK(rec.reward == -30.0);
}

TEST_CASE("rollouts are reproducible") {
  auto run = [] {
    BookBench bb;
    WorldInstance w(bb.spec, 5);
    Rng rng(6);
    std::vector<std::tuple<std::uint32_t, std::uint32_t, bool, bool>> out;
    for (int t = 0; t < 100; ++t) {
      w.reset_uniform();
      const auto r = bb.agent.execute_rollout(bb.skill, w, {true, false}, rng);
      out.emplace_back(r.estimated_state.value, r.behaviour.value, r.success, r.bored);
    }
    return out;
  };
  CHECK(run() == run());
}

TEST_CASE("well-trained") {
  fixtures::Bench b(3, 2);
  for (int i = 0; i < 19; ++i) b.agent.record_reward(b.skill, 1000);
  CHECK_FALSE(b.agent.is_well_trained(b.skill));
  b.agent.record_reward(b.skill, 1000);
  CHECK(b.agent.is_well_trained(b.skill));

  fixtures::Bench alt(3, 2);
  for (int i = 0; i < 40; ++i) alt.agent.record_reward(alt.skill, i % 2 ? 1000 : -30);
  CHECK_FALSE(alt.agent.is_well_trained(alt.skill));
}

TEST_CASE("promotion into another skill") {
  Agent a;
  a.auto_promote = false;
  const auto v = a.add_atomic_behaviour("void", 0, Grasp::neutral, true);
  const auto push = a.add_atomic_behaviour("push", 1, Grasp::neutral);
  SkillRegistration first{"first", 0, false, {{SensingActionId{0}, 2, 1.0, Grasp::neutral}}, {v, push}};
  SkillRegistration second{"second", 1, false, {{SensingActionId{0}, 4, 1.0, Grasp::neutral}}, {v, push}};
  const SkillId s1 = a.register_skill(first);
  const SkillId s2 = a.register_skill(second);

  const std::vector<SkillId> targets{s2};
  CHECK_THROWS_AS(a.promote_to_behaviour(s1, targets), Error);  // not trained yet
  for (int i = 0; i < 20; ++i) a.record_reward(s1, 1000);

  const auto edges = a.net().network().edge_count();
  const auto clips = a.model(s2, SensingActionId{0}).network().clip_count();
  a.promote_to_behaviour(s1, targets);
  const auto pb = a.promoted_behaviour(s1);
  REQUIRE(pb);
  CHECK(a.net().behaviour(*pb).kind == BehaviourKind::skill);
  CHECK(a.net().network().edge_count() == edges + 4);
  for (std::uint32_t e = 0; e < 4; ++e) CHECK(a.net().state_weight(s2, SensingActionId{0}, StateId{e}, *pb) == 200.0);
  CHECK(a.model(s2, SensingActionId{0}).network().clip_count() == clips + 4);

  const std::vector<SkillId> self{s1};
  CHECK_THROWS_AS(a.promote_to_behaviour(s1, self), Error);
}

}  // TEST_SUITE
