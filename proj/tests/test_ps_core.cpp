#include <doctest.h>

#include <cmath>
#include <vector>

#include "playlearn/error.hpp"
#include "playlearn/ps_core.hpp"
#include "playlearn/rng.hpp"

using namespace playlearn;

namespace {

double prob(const ClipNetwork& net, ClipId from, ClipId to) {
  for (auto [c, p] : net.transition_probabilities(from)) {
    if (c == to) return p;
  }
  return 0.0;
}

}  // namespace

TEST_SUITE("ps_core") {

TEST_CASE("clip ids are distinct") {
  ClipNetwork net;
  std::vector<ClipId> ids;
  for (int i = 0; i < 1000; ++i) ids.push_back(net.add_clip());
  for (std::size_t i = 0; i < ids.size(); ++i) CHECK(ids[i].value == i);
  CHECK(net.clip_count() == 1000);
}

TEST_CASE("normalisation") {
  ClipNetwork net;
  const auto a = net.add_clip("a");
  const auto b = net.add_clip("b");
  const auto c = net.add_clip("c");
  const auto d = net.add_clip("d");

  net.connect(a, b, 200);
  CHECK(prob(net, a, b) == doctest::Approx(1.0));

  net.connect(a, c, 200);
  net.connect(a, d, 300);
  CHECK(prob(net, a, b) == doctest::Approx(2.0 / 7.0));
  CHECK(prob(net, a, c) == doctest::Approx(0.2857142857));
  CHECK(prob(net, a, d) == doctest::Approx(0.4285714286));

  ClipNetwork two;
  const auto x = two.add_clip(), y = two.add_clip(), z = two.add_clip();
  two.connect(x, y, 1);
  two.connect(x, z, 3);
  CHECK(prob(two, x, z) == doctest::Approx(0.75));
}

TEST_CASE("repeated connect overwrites") {
  ClipNetwork net;
  const auto a = net.add_clip(), b = net.add_clip();
  net.connect(a, b, 5);
  net.connect(a, b, 7);
  CHECK(net.weight(a, b) == 7);
  CHECK(net.edge_count() == 1);
}

TEST_CASE("errors") {
  ClipNetwork net;
  const auto a = net.add_clip(), b = net.add_clip();
  CHECK_THROWS_AS(net.connect(a, b, 0.0), Error);
  CHECK_THROWS_AS(net.connect(a, b, -1.0), Error);
  CHECK_THROWS_AS(net.connect(a, ClipId{9}, 1.0), Error);
  CHECK_THROWS_AS((void)net.transition_probabilities(a), Error);
  Rng rng(1);
  CHECK_THROWS_AS((void)net.sample_next(b, rng), Error);
  net.connect(a, b, 1.0);
  CHECK_THROWS_WITH(net.reinforce_path({b, a}, 1.0, 0.0), doctest::Contains("broken path"));
}

TEST_CASE("sampling") {
  ClipNetwork net;
  const auto a = net.add_clip(), b = net.add_clip(), c = net.add_clip();
  net.connect(a, b, 1);
  Rng rng(3);
  for (int i = 0; i < 100; ++i) CHECK(net.sample_next(a, rng) == b);

  net.connect(a, c, 1e12);
  int hits = 0;
  for (int i = 0; i < 100000; ++i) hits += net.sample_next(a, rng) == c;
  CHECK(hits > 99900);
}

TEST_CASE("sampling frequencies within three standard errors") {
  ClipNetwork net;
  const auto root = net.add_clip();
  const std::vector<double> w{1, 2, 3, 4, 10};
  std::vector<ClipId> kids;
  for (double h : w) {
    kids.push_back(net.add_clip());
    net.connect(root, kids.back(), h);
  }
  Rng rng(11);
  constexpr int n = 100000;
  std::vector<int> count(w.size(), 0);
  for (int i = 0; i < n; ++i) count[net.sample_next(root, rng).value - 1]++;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double p = prob(net, root, kids[k]);
    const double se = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(count[k] / double(n) - p) < 3 * se);
  }
}

TEST_CASE("sampling is reproducible") {
  ClipNetwork net;
  const auto a = net.add_clip();
  for (int i = 0; i < 5; ++i) net.connect(a, net.add_clip(), 1 + i);
  Rng r1(99), r2(99);
  for (int i = 0; i < 1000; ++i) CHECK(net.sample_next(a, r1) == net.sample_next(a, r2));
}

TEST_CASE("update rule") {
  ClipNetwork net;
  const auto a = net.add_clip(), b = net.add_clip(), c = net.add_clip();
  net.connect(a, b, 200);
  net.connect(a, c, 10);
  const EdgeRef ab{a, b}, ac{a, c};

  net.reinforce(std::span(&ab, 1), 1000, 0.0);
  CHECK(net.weight(a, b) == 1200);
  CHECK(net.weight(a, c) == 10);  // off-path, zeta = 0

  net.connect(a, b, 200);
  net.reinforce(std::span(&ab, 1), -30, 0.0);
  CHECK(net.weight(a, b) == 170);

  net.reinforce(std::span(&ac, 1), -30, 0.0);
  CHECK(net.weight(a, c) == 1);
}

TEST_CASE("forgetting applies to every edge") {
  ClipNetwork net;
  const auto a = net.add_clip(), b = net.add_clip(), c = net.add_clip(), d = net.add_clip();
  net.connect(a, b, 201);
  net.connect(a, c, 11);
  net.connect(b, d, 5);
  net.reinforce_path({a, b}, 0.0, 0.5);
  CHECK(net.weight(a, b) == 101);
  CHECK(net.weight(a, c) == 6);
  CHECK(net.weight(b, d) == 3);
}

TEST_CASE("property: update identities on random networks") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    ClipNetwork net;
    const std::size_t n = 2 + rng.below(8);
    for (std::size_t i = 0; i < n; ++i) net.add_clip();
    std::vector<EdgeRef> edges;
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = 0; j < n; ++j) {
        if (i != j && rng.bernoulli(0.5)) {
          net.connect(ClipId{i}, ClipId{j}, 1.0 + rng.uniform() * 500);
          edges.push_back({ClipId{i}, ClipId{j}});
        }
      }
    }
    if (edges.empty()) continue;
    auto snapshot = [&] {
      std::vector<double> w;
      for (auto e : edges) w.push_back(net.weight(e.from, e.to));
      return w;
    };
    const EdgeRef pick = edges[rng.below(edges.size())];

    // Rows stay normalised.
    for (std::uint32_t i = 0; i < n; ++i) {
      if (net.out_edges(ClipId{i}).empty()) continue;
      double sum = 0;
      for (auto [c, p] : net.transition_probabilities(ClipId{i})) sum += p;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }

    // zeta = 0, r = 0 is the identity.
    const auto before = snapshot();
    net.reinforce(std::span(&pick, 1), 0.0, 0.0);
    CHECK(snapshot() == before);

    // Off-path weights are untouched with zeta = 0; every weight stays >= 1.
    const double r = rng.uniform() * 2000 - 1000;
    net.reinforce(std::span(&pick, 1), r, 0.0);
    const auto after = snapshot();
    for (std::size_t k = 0; k < edges.size(); ++k) {
      CHECK(after[k] >= 1.0);
      const bool on_path = edges[k].from == pick.from && edges[k].to == pick.to;
      if (on_path) {
        CHECK(after[k] == doctest::Approx(std::max(1.0, before[k] + r)));
      } else {
        CHECK(after[k] == before[k]);
      }
    }

    // zeta = 1, r = 0 collapses everything to one.
    net.reinforce(std::span(&pick, 1), 0.0, 1.0);
    for (double h : snapshot()) CHECK(h == 1.0);
  }
}

}  // TEST_SUITE
