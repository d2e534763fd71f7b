#include "playlearn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "playlearn/error.hpp"

namespace playlearn {

using nlohmann::json;

// ---------------------------------------------------------------- config

void ExperimentConfig::validate() const {
  params.validate();
  if (replicas == 0) throw Error("replicas must be positive");
  if (rollouts == 0) throw Error("rollouts must be positive");
  if (smoothing == 0) throw Error("smoothing window must be positive");
  if (world == "book" && behaviours < 5) throw Error("the book world needs J >= 5 behaviours");
  for (double r : {controller_success, sensing_accuracy, basic_success}) {
    if (r < 0.0 || r > 1.0) throw Error("reliability outside [0,1]");
  }
}

std::string ExperimentConfig::variant() const {
  if (active_learning && creativity) return "creative";
  if (creativity) return "creative_only";
  if (active_learning) return "active";
  return "no_ext";
}

ExperimentConfig apply_config_json(const std::string& json_text, ExperimentConfig c) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error("config must be a JSON object");
  try {
    for (const auto& [key, v] : doc.items()) {
      Params& p = c.params;
      if (key == "world") c.world = v.get<std::string>();
      else if (key == "behaviours") c.behaviours = v.get<std::size_t>();
      else if (key == "active_learning") c.active_learning = v.get<bool>();
      else if (key == "creativity") c.creativity = v.get<bool>();
      else if (key == "replicas") c.replicas = v.get<std::size_t>();
      else if (key == "rollouts") c.rollouts = v.get<std::size_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "smoothing") c.smoothing = v.get<std::size_t>();
      else if (key == "threads") c.threads = v.get<std::size_t>();
      else if (key == "controller_success") c.controller_success = v.get<double>();
      else if (key == "sensing_accuracy") c.sensing_accuracy = v.get<double>();
      else if (key == "basic_success") c.basic_success = v.get<double>();
      else if (key == "initial_states") {
        const auto s = v.get<std::string>();
        if (s == "uniform") c.initial_states = InitialStates::uniform;
        else if (s == "round_robin") c.initial_states = InitialStates::round_robin;
        else throw Error("unknown initial_states '" + s + "'");
      }
      else if (key == "r_success") p.r_success = v.get<double>();
      else if (key == "r_failure") p.r_failure = v.get<double>();
      else if (key == "zeta") p.zeta = v.get<double>();
      else if (key == "zeta_env") p.zeta_env = v.get<double>();
      else if (key == "r_env") p.r_env = v.get<double>();
      else if (key == "h_init") p.h_init = v.get<double>();
      else if (key == "h_init_env") p.h_init_env = v.get<double>();
      else if (key == "alpha") p.alpha = v.get<double>();
      else if (key == "beta") p.beta = v.get<double>();
      else if (key == "gamma") p.gamma = v.get<double>();
      else if (key == "delta") p.delta = v.get<double>();
      else if (key == "epsilon") p.epsilon = v.get<double>();
      else if (key == "l_max") p.l_max = v.get<std::size_t>();
      else if (key == "t_thresh") p.t_thresh = v.get<std::size_t>();
      else if (key == "r_thresh") p.r_thresh = v.get<double>();
      else throw Error("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw Error(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return apply_config_json(buf.str(), std::move(base));
}

std::shared_ptr<const WorldSpec> build_world(const ExperimentConfig& c) {
  if (c.world == "book") {
    BookWorldOptions o;
    o.num_distractors = c.behaviours - 5;
    o.include_compound_rotations = !c.creativity;
    o.controller_success = c.controller_success;
    o.slide_accuracy = c.sensing_accuracy;
    o.basic_success = c.basic_success;
    return std::make_shared<const WorldSpec>(make_book_world(o));
  }
  if (c.world == "tower") {
    TowerWorldOptions o;
    o.controller_success = c.controller_success;
    o.poke_accuracy = c.sensing_accuracy;
    o.basic_success = c.basic_success;
    return std::make_shared<const WorldSpec>(make_tower_world(o));
  }
  return std::make_shared<const WorldSpec>(load_world(c.world));
}

// ---------------------------------------------------------------- curves

std::vector<double> centered_moving_average(std::span<const double> values, std::size_t window) {
  if (window == 0) throw Error("smoothing window must be positive");
  const std::size_t n = values.size();
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t lo = t >= window / 2 ? t - window / 2 : 0;
    const std::size_t hi = std::min(n, t + window - window / 2);
    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) sum += values[i];
    out[t] = sum / static_cast<double>(hi - lo);
  }
  return out;
}

SuccessCurve make_curve(std::span<const std::uint32_t> successes, std::size_t replicas, std::size_t window) {
  SuccessCurve c;
  c.replicas = replicas;
  c.window = window;
  c.raw.reserve(successes.size());
  for (auto s : successes) c.raw.push_back(static_cast<double>(s) / static_cast<double>(replicas));
  c.smoothed = centered_moving_average(c.raw, window);
  return c;
}

// ---------------------------------------------------------------- replicas

ReplicaRun run_replica_full(const ExperimentConfig& config, std::size_t replica_index) {
  config.validate();
  auto spec = build_world(config);
  const std::uint64_t replica_seed = mix_seed(config.seed, replica_index);
  WorldInstance world(spec, mix_seed(replica_seed, 1));
  Rng rng(mix_seed(replica_seed, 2));

  ReplicaRun run{{}, Agent(config.params), {}};
  run.skill = run.agent.register_world_skill(*spec, 0);
  const RolloutOptions options{config.active_learning, config.creativity};
  const std::size_t states = spec->latent_count();

  run.records.reserve(config.rollouts);
  for (std::size_t t = 0; t < config.rollouts; ++t) {
    if (config.initial_states == InitialStates::round_robin) {
      world.reset((replica_index + t) % states);
    } else {
      world.reset_uniform();
    }
    run.records.push_back(run.agent.execute_rollout(run.skill, world, options, rng));
  }
  return run;
}

std::vector<RolloutRecord> run_replica(const ExperimentConfig& config, std::size_t replica_index) {
  return run_replica_full(config, replica_index).records;
}

namespace {

struct ReplicaSummary {
  std::vector<std::uint8_t> success;
  std::vector<std::uint8_t> start;
  std::size_t bored = 0;
  std::size_t creative = 0;
  std::vector<std::vector<std::string>> compounds;
};

ReplicaSummary summarise(const ExperimentConfig& config, std::size_t index, const WorldSpec& spec) {
  ReplicaRun run = run_replica_full(config, index);
  ReplicaSummary s;
  for (const auto& r : run.records) {
    s.success.push_back(r.success ? 1 : 0);
    s.start.push_back(static_cast<std::uint8_t>(r.start_latent));
    s.bored += r.bored ? 1 : 0;
    s.creative += r.creative ? 1 : 0;
  }
  const auto& net = run.agent.net();
  for (BehaviourId b : net.skill(run.skill).behaviours) {
    if (net.behaviour(b).kind != BehaviourKind::compound) continue;
    std::vector<std::string> names;
    for (BehaviourId part : run.agent.flatten(b)) {
      const auto& pb = net.behaviour(part);
      names.push_back(pb.kind == BehaviourKind::skill ? pb.name : spec.behaviours[pb.world_behaviour].name);
    }
    s.compounds.push_back(std::move(names));
  }
  return s;
}

}  // namespace

ExperimentOutcome run_experiment_detailed(const ExperimentConfig& config) {
  config.validate();
  const auto spec = build_world(config);
  const std::size_t n = config.replicas;
  std::vector<ReplicaSummary> summaries(n);

  std::size_t workers = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      try {
        summaries[i] = summarise(config, i, *spec);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  // Reduction in replica order: independent of scheduling.
  ExperimentOutcome out;
  const std::size_t t_max = config.rollouts;
  const std::size_t states = spec->latent_count();
  std::vector<std::uint32_t> successes(t_max, 0);
  out.starts_by_latent.assign(t_max, std::vector<std::uint32_t>(states, 0));
  out.successes_by_latent.assign(t_max, std::vector<std::uint32_t>(states, 0));
  for (auto& s : summaries) {
    for (std::size_t t = 0; t < t_max; ++t) {
      successes[t] += s.success[t];
      out.starts_by_latent[t][s.start[t]] += 1;
      out.successes_by_latent[t][s.start[t]] += s.success[t];
    }
    out.bored_rollouts += s.bored;
    out.creative_insertions += s.creative;
    out.compounds.push_back(std::move(s.compounds));
  }
  out.curve = make_curve(successes, n, config.smoothing);
  return out;
}

SuccessCurve run_experiment(const ExperimentConfig& config) { return run_experiment_detailed(config).curve; }

SuccessCurve conditional_curve(const ExperimentOutcome& outcome, std::size_t latent, std::size_t window) {
  SuccessCurve c;
  c.window = window;
  c.replicas = outcome.compounds.size();
  for (std::size_t t = 0; t < outcome.starts_by_latent.size(); ++t) {
    const auto starts = outcome.starts_by_latent[t].at(latent);
    c.raw.push_back(starts == 0 ? 0.0
                                : static_cast<double>(outcome.successes_by_latent[t][latent]) / starts);
  }
  c.smoothed = centered_moving_average(c.raw, window);
  return c;
}

// ---------------------------------------------------------------- analysis

std::optional<std::size_t> convergence_rollout(const SuccessCurve& curve, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw Error("threshold must lie in (0,1)");
  for (std::size_t t = 0; t < curve.smoothed.size(); ++t) {
    if (curve.smoothed[t] >= threshold) return t;
  }
  return std::nullopt;
}

std::size_t baseline_rollouts(std::size_t j) {
  if (j == 0) throw Error("baseline needs at least one behaviour");
  return 3 * 4 * j + j;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("line fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error("degenerate fit: all x values equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

double asymptotic_speedup(std::span<const SpeedupPoint> points) {
  std::vector<double> x, a, b;
  for (const auto& p : points) {
    x.push_back(p.j);
    a.push_back(p.variant_a);
    b.push_back(p.variant_b);
  }
  const LinearFit fa = fit_line(x, a);
  const LinearFit fb = fit_line(x, b);
  if (fb.slope == 0.0) throw Error("degenerate fit: reference slope is zero");
  return 1.0 - fa.slope / fb.slope;
}

// ---------------------------------------------------------------- results

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw Error("unknown format '" + text + "' (expected csv or json)");
}

ResultEntry run_entry(const ExperimentConfig& config, double threshold) {
  ResultEntry e;
  e.variant = config.variant();
  const auto world = build_world(config);
  e.world = world->name;
  // J is nominal in the book world; elsewhere it is the seeded behaviour count.
  e.j = config.world == "book" ? config.behaviours : world->skills.at(0).preparatory.size();
  e.curve = run_experiment(config);
  e.converged = convergence_rollout(e.curve, threshold);
  return e;
}

ResultSet run_grid(const ExperimentConfig& base, std::span<const std::size_t> js,
                   std::span<const std::string> variants, double threshold) {
  ResultSet rs;
  rs.threshold = threshold;
  rs.seed = base.seed;
  rs.replicas = base.replicas;
  for (const auto& v : variants) {
    if (v != "no_ext" && v != "active" && v != "creative") throw Error("unknown variant '" + v + "'");
  }
  for (std::size_t j : js) {
    for (const auto& v : variants) {
      ExperimentConfig c = base;
      c.behaviours = j;
      c.active_learning = v != "no_ext";
      c.creativity = v == "creative";
      rs.entries.push_back(run_entry(c, threshold));
    }
  }
  compute_speedup(rs);
  return rs;
}

void compute_speedup(ResultSet& rs) {
  std::vector<SpeedupPoint> points;
  for (const auto& a : rs.entries) {
    if (a.variant != "active" || !a.converged) continue;
    for (const auto& b : rs.entries) {
      if (b.variant == "no_ext" && b.j == a.j && b.world == a.world && b.converged) {
        points.push_back({static_cast<double>(a.j), static_cast<double>(*a.converged),
                          static_cast<double>(*b.converged)});
      }
    }
  }
  rs.speedup.reset();
  try {
    if (points.size() >= 2) rs.speedup = asymptotic_speedup(points);
  } catch (const Error&) {
    // Degenerate fits leave the speedup unset.
  }
}

std::string summary_path(const std::string& path) { return path + ".summary.json"; }

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write output file " + path);
  return out;
}

std::string num(double v) { return fmt::format("{:.6f}", v); }

}  // namespace

void emit_results(const ResultSet& rs, OutputFormat format, const std::string& path) {
  {
    auto out = open_output(path);
    if (format == OutputFormat::csv) {
      out << "variant,world,J,rollout,success_rate_raw,success_rate_smoothed\n";
      for (const auto& e : rs.entries) {
        for (std::size_t t = 0; t < e.curve.raw.size(); ++t) {
          out << e.variant << ',' << e.world << ',' << e.j << ',' << t << ',' << num(e.curve.raw[t]) << ','
              << num(e.curve.smoothed[t]) << '\n';
        }
      }
    } else {
      // Numbers are written as fixed-precision literals for byte-stable output.
      out << "{\"curves\":[";
      for (std::size_t i = 0; i < rs.entries.size(); ++i) {
        const auto& e = rs.entries[i];
        out << (i ? "," : "") << "\n{\"variant\":\"" << e.variant << "\",\"world\":\"" << e.world
            << "\",\"J\":" << e.j << ",\"window\":" << e.curve.window << ",\"success_rate_raw\":[";
        for (std::size_t t = 0; t < e.curve.raw.size(); ++t) out << (t ? "," : "") << num(e.curve.raw[t]);
        out << "],\"success_rate_smoothed\":[";
        for (std::size_t t = 0; t < e.curve.smoothed.size(); ++t) out << (t ? "," : "") << num(e.curve.smoothed[t]);
        out << "]}";
      }
      out << "\n]}\n";
    }
    if (!out) throw Error("failed writing " + path);
  }

  auto out = open_output(summary_path(path));
  out << "{\n  \"threshold\": " << num(rs.threshold) << ",\n  \"seed\": " << rs.seed
      << ",\n  \"replicas\": " << rs.replicas << ",\n  \"smoothing\": "
      << (rs.entries.empty() ? 0 : rs.entries.front().curve.window) << ",\n  \"speedup\": "
      << (rs.speedup ? num(*rs.speedup) : std::string("null")) << ",\n  \"entries\": [";
  for (std::size_t i = 0; i < rs.entries.size(); ++i) {
    const auto& e = rs.entries[i];
    out << (i ? "," : "") << "\n    {\"variant\": \"" << e.variant << "\", \"world\": \"" << e.world
        << "\", \"J\": " << e.j << ", \"converged_at\": "
        << (e.converged ? std::to_string(*e.converged) : std::string("null"))
        << ", \"baseline\": " << (e.world == "book" ? std::to_string(baseline_rollouts(e.j)) : std::string("null"))
        << "}";
  }
  out << "\n  ]\n}\n";
  if (!out) throw Error("failed writing " + summary_path(path));
}

double speedup_from_summary(const std::string& path, const std::string& variant_a, const std::string& variant_b) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open summary file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("summary " + path + " is not valid JSON: " + e.what());
  }
  std::vector<SpeedupPoint> points;
  try {
    for (const auto& a : doc.at("entries")) {
      if (a.at("variant") != variant_a || a.at("converged_at").is_null()) continue;
      for (const auto& b : doc.at("entries")) {
        if (b.at("variant") == variant_b && b.at("J") == a.at("J") && b.at("world") == a.at("world") &&
            !b.at("converged_at").is_null()) {
          points.push_back({a.at("J").get<double>(), a.at("converged_at").get<double>(),
                            b.at("converged_at").get<double>()});
        }
      }
    }
  } catch (const json::exception& e) {
    throw Error("malformed summary " + path + ": " + e.what());
  }
  if (points.size() < 2) throw Error("summary needs converged " + variant_a + " and " + variant_b + " runs at two J values");
  return asymptotic_speedup(points);
}

}  // namespace playlearn
