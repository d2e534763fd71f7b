// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--unit-tests PATH] [--expect-fail 4a,5,...] [--replicas N]
//
// Criteria listed in --expect-fail are known to be out of reach with the
// shipped worlds; they still print FAIL but do not fail the exit status.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "playlearn/harness.hpp"

using namespace playlearn;

namespace {

struct Reporter {
  std::set<std::string> expected;
  int unexpected = 0;

  void line(const std::string& id, bool pass, const std::string& what, const std::string& detail) {
    std::string status = pass ? "PASS" : "FAIL";
    if (expected.count(id)) {
      status += pass ? " (listed as expected failure)" : " (expected)";
    } else if (!pass) {
      ++unexpected;
    }
    std::cout << fmt::format("[{}] {:<3} {}: {}\n", status, id, what, detail) << std::flush;
  }
};

std::string show(const std::optional<std::size_t>& t) { return t ? std::to_string(*t) : std::string(">T"); }

bool within(const std::optional<std::size_t>& got, double target, double tol) {
  return got && std::abs(static_cast<double>(*got) - target) <= tol * target;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string unit_tests;
  std::string expect;
  std::size_t replicas = 1000;
  std::uint64_t seed = 42;
  app.add_option("--unit-tests", unit_tests, "unit test binary timed for the property-suite criterion");
  app.add_option("--expect-fail", expect, "comma-separated criteria known to fail");
  app.add_option("--replicas", replicas, "replicas per curve")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "master seed");
  CLI11_PARSE(app, argc, argv);

  Reporter rep;
  for (std::size_t start = 0; start < expect.size();) {
    const auto end = std::min(expect.find(',', start), expect.size());
    rep.expected.insert(expect.substr(start, end - start));
    start = end + 1;
  }

  ExperimentConfig base;
  base.replicas = replicas;
  base.seed = seed;

  const std::vector<std::size_t> js{5, 10, 15, 20};
  const std::map<std::size_t, double> no_ext_ref{{5, 57}, {10, 109}, {15, 162}, {20, 217}};
  const std::map<std::size_t, double> active_ref{{5, 52}, {10, 100}, {15, 150}, {20, 199}};

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::string> variants{"no_ext", "active"};
  const ResultSet grid = run_grid(base, js, variants);
  const double grid_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::map<std::string, std::map<std::size_t, std::optional<std::size_t>>> conv;
  for (const auto& e : grid.entries) conv[e.variant][e.j] = e.converged;

  // 1. Convergence within 25 % of the reference counts.
  {
    bool ok = true;
    std::string detail;
    for (std::size_t j : js) {
      ok = ok && within(conv["no_ext"][j], no_ext_ref.at(j), 0.25) && within(conv["active"][j], active_ref.at(j), 0.25);
      detail += fmt::format("J={} no_ext {} (ref {}) active {} (ref {}); ", j, show(conv["no_ext"][j]),
                            no_ext_ref.at(j), show(conv["active"][j]), active_ref.at(j));
    }
    rep.line("1", ok, "convergence within 25% of reference", detail + fmt::format("grid {:.1f}s", grid_seconds));
  }

  // 2. Ordering.
  {
    bool ok = true;
    for (std::size_t j : js) {
      ok = ok && conv["active"][j] && conv["no_ext"][j] && *conv["active"][j] < *conv["no_ext"][j];
    }
    rep.line("2", ok, "active converges before no_ext at every J", "see criterion 1");
  }

  // 3. Linearity and speedup.
  {
    bool ok = true;
    std::string detail;
    for (const std::string v : {"no_ext", "active"}) {
      std::vector<double> x, y;
      for (std::size_t j : js) {
        if (!conv[v][j]) continue;
        x.push_back(static_cast<double>(j));
        y.push_back(static_cast<double>(*conv[v][j]));
      }
      if (x.size() < js.size()) {
        ok = false;
        detail += v + " did not converge everywhere; ";
        continue;
      }
      const auto fit = fit_line(x, y);
      ok = ok && fit.r_squared >= 0.95;
      detail += fmt::format("{} slope {:.3f} R2 {:.4f}; ", v, fit.slope, fit.r_squared);
    }
    ok = ok && grid.speedup && *grid.speedup >= 0.04 && *grid.speedup <= 0.14;
    detail += grid.speedup ? fmt::format("speedup {:.4f} (band 0.04..0.14)", *grid.speedup) : "speedup undefined";
    rep.line("3", ok, "linear scaling and asymptotic speedup", detail);
  }

  // 4. Creativity.
  {
    ExperimentConfig c = base;
    c.active_learning = true;
    c.creativity = true;
    std::map<std::size_t, SuccessCurve> curves;
    for (std::size_t j : {5u, 10u, 20u}) {
      c.behaviours = j;
      curves[j] = run_experiment(c);
    }

    const auto& s = curves[5].smoothed;
    std::size_t run = 0, longest = 0, rise = s.size();
    for (std::size_t t = 0; t < s.size(); ++t) {
      if (s[t] > 0.5) {
        rise = t;
        break;
      }
      run = (s[t] >= 0.25 && s[t] <= 0.40) ? run + 1 : 0;
      longest = std::max(longest, run);
    }
    rep.line("4a", longest >= 20, "creativity plateau in [0.25,0.40] for >= 20 rollouts",
             fmt::format("longest run {} before first exceeding 0.5 at rollout {}", longest, rise));

    const auto c5 = convergence_rollout(curves[5]);
    const auto c10 = convergence_rollout(curves[10]);
    rep.line("4b", within(c5, 63, 0.25) && within(c10, 127, 0.25), "creative convergence near 63/127",
             fmt::format("J=5 {} J=10 {}; final smoothed {:.3f} / {:.3f}", show(c5), show(c10),
                         curves[5].smoothed.back(), curves[10].smoothed.back()));

    const auto c20 = convergence_rollout(curves[20]);
    rep.line("4c", !c20, "creative J=20 does not converge in 300 rollouts",
             fmt::format("J=20 {}; final smoothed {:.3f}", show(c20), curves[20].smoothed.back()));
  }

  // 5. Baseline column.
  {
    const std::map<std::size_t, std::size_t> ref{{5, 65}, {10, 130}, {15, 190}, {20, 260}};
    bool ok = true;
    std::string detail;
    for (auto [j, want] : ref) {
      const auto got = baseline_rollouts(j);
      ok = ok && got == want;
      detail += fmt::format("J={} {} (ref {}); ", j, got, want);
    }
    rep.line("5", ok, "baseline column", detail);
  }

  // 6. Tower.
  {
    ExperimentConfig c = base;
    c.world = "tower";
    c.creativity = true;
    c.rollouts = 500;
    const auto out = run_experiment_detailed(c);
    std::size_t with = 0;
    for (const auto& replica : out.compounds) {
      bool found = false;
      for (const auto& names : replica) {
        found = found || std::count(names.begin(), names.end(), "simple_placement") >= 3;
      }
      with += found;
    }
    const auto from3 = conditional_curve(out, 3, c.smoothing);
    const double best = *std::max_element(from3.smoothed.begin(), from3.smoothed.end());
    const bool ok = with * 2 > out.compounds.size() && best >= 0.8;
    rep.line("6", ok, "tower: >=3-removal compound and success >= 0.8 from height 3",
             fmt::format("{}/{} replicas built the compound; best smoothed success from h3 {:.3f}", with,
                         out.compounds.size(), best));
  }

  // 7. Property suites.
  if (!unit_tests.empty()) {
    const auto start = std::chrono::steady_clock::now();
    const int rc = std::system((unit_tests + " --minimal > /dev/null 2>&1").c_str());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep.line("7", rc == 0 && secs < 10.0, "property and unit suites pass in < 10 s",
             fmt::format("exit {} in {:.2f}s", rc, secs));
  } else {
    rep.line("7", false, "property and unit suites pass in < 10 s", "no --unit-tests binary given");
  }

  return rep.unexpected == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
