#include "playlearn/worlds.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "playlearn/error.hpp"

namespace playlearn {

Grasp parse_grasp(const std::string& text) {
  if (text == "neutral") return Grasp::neutral;
  if (text == "grasped") return Grasp::grasped;
  if (text == "ungrasped") return Grasp::ungrasped;
  throw Error("unknown grasp tag '" + text + "'");
}

const char* to_string(Grasp g) {
  switch (g) {
    case Grasp::grasped:
      return "grasped";
    case Grasp::ungrasped:
      return "ungrasped";
    case Grasp::neutral:
      break;
  }
  return "neutral";
}

namespace {

template <typename T>
std::size_t index_by_name(const std::vector<T>& items, const std::string& name, const char* what) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].name == name) return i;
  }
  throw Error(std::string("unknown ") + what + " '" + name + "'");
}

std::vector<double> one_hot_row(std::size_t size, std::size_t hot, double accuracy) {
  std::vector<double> row(size, size > 1 ? (1.0 - accuracy) / static_cast<double>(size - 1) : 0.0);
  row[hot] = size > 1 ? accuracy : 1.0;
  return row;
}

WorldSensing diagonal_sensing(std::string name, std::size_t states, double accuracy) {
  WorldSensing s{std::move(name), {}, Grasp::neutral, std::nullopt};
  for (std::size_t l = 0; l < states; ++l) s.confusion.push_back(one_hot_row(states, l, accuracy));
  return s;
}

WorldSensing uniform_sensing(std::string name, std::size_t states) {
  WorldSensing s{std::move(name), {}, Grasp::neutral, std::nullopt};
  s.confusion.assign(states, std::vector<double>(states, 1.0 / static_cast<double>(states)));
  return s;
}

// A sensor that cannot tell anything apart: one perceptual state.
WorldSensing no_sensing(std::size_t states) {
  WorldSensing s{"none", std::vector<std::vector<double>>(states, std::vector<double>{1.0}),
                 Grasp::neutral, 0.5};
  return s;
}

WorldBehaviour identity_behaviour(std::string name, std::size_t states, double rate) {
  WorldBehaviour b{std::move(name), {}, rate, Grasp::neutral};
  for (std::size_t l = 0; l < states; ++l) b.table.push_back(l);
  return b;
}

}  // namespace

std::size_t WorldSpec::behaviour_index(const std::string& n) const {
  return index_by_name(behaviours, n, "behaviour");
}
std::size_t WorldSpec::sensing_index(const std::string& n) const {
  return index_by_name(sensing, n, "sensing action");
}
std::size_t WorldSpec::skill_index(const std::string& n) const {
  return index_by_name(skills, n, "skill");
}

void WorldSpec::validate() const {
  const std::size_t n = latent_count();
  if (n == 0) throw Error("world '" + name + "' has no latent states");
  if (skills.empty()) throw Error("world '" + name + "' has no skills");
  for (const auto& b : behaviours) {
    if (b.table.size() != n) throw Error("behaviour '" + b.name + "' table is not total");
    for (std::size_t to : b.table) {
      if (to >= n) throw Error("behaviour '" + b.name + "' maps outside the state set");
    }
    if (b.success_rate < 0.0 || b.success_rate > 1.0) {
      throw Error("behaviour '" + b.name + "' success rate outside [0,1]");
    }
  }
  for (const auto& s : sensing) {
    if (s.confusion.size() != n) throw Error("sensing '" + s.name + "' needs one row per latent state");
    const std::size_t p = s.percept_count();
    if (p == 0) throw Error("sensing '" + s.name + "' has no perceptual states");
    for (const auto& row : s.confusion) {
      if (row.size() != p) throw Error("sensing '" + s.name + "' has ragged confusion rows");
      double sum = 0.0;
      for (double v : row) {
        if (v < 0.0) throw Error("sensing '" + s.name + "' has a negative confusion entry");
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-9) throw Error("sensing '" + s.name + "' row does not sum to 1");
    }
    if (!s.fixed_accuracy && p != n) {
      throw Error("sensing '" + s.name + "' needs a fixed accuracy when percepts != latent states");
    }
  }
  for (const auto& sk : skills) {
    if (sk.basic_behaviour >= behaviours.size()) throw Error("skill '" + sk.name + "' basic behaviour missing");
    if (sk.success.size() != n) throw Error("skill '" + sk.name + "' predicate is not total");
    for (std::size_t b : sk.preparatory) {
      if (b >= behaviours.size()) throw Error("skill '" + sk.name + "' references a missing behaviour");
    }
  }
}

WorldSpec make_book_world(const BookWorldOptions& o) {
  constexpr std::size_t kStates = 4;
  WorldSpec w;
  w.name = "book";
  w.latent_states = {"0deg", "90deg", "180deg", "270deg"};

  w.behaviours.push_back(identity_behaviour("void", kStates, o.controller_success));
  for (std::size_t k = 1; k <= 3; ++k) {
    WorldBehaviour r{"rotate" + std::to_string(90 * k), {}, o.controller_success, Grasp::neutral};
    for (std::size_t l = 0; l < kStates; ++l) r.table.push_back((l + kStates - k) % kStates);
    w.behaviours.push_back(std::move(r));
  }
  // Flipping does not change the orientation class in this abstraction.
  w.behaviours.push_back(identity_behaviour("flip", kStates, o.controller_success));
  for (std::size_t d = 0; d < o.num_distractors; ++d) {
    w.behaviours.push_back(identity_behaviour("distractor" + std::to_string(d), kStates, o.controller_success));
  }
  w.behaviours.push_back(identity_behaviour("grasp", kStates, o.basic_success));

  auto slide = diagonal_sensing("slide", kStates, o.slide_accuracy);
  w.sensing.push_back(std::move(slide));
  w.sensing.push_back(uniform_sensing("press", kStates));
  w.sensing.push_back(uniform_sensing("poke", kStates));
  w.sensing.push_back(no_sensing(kStates));

  WorldSkill skill{"grasp_book", w.behaviour_index("grasp"), {true, false, false, false}, {}, false};
  skill.preparatory.push_back(w.behaviour_index("void"));
  skill.preparatory.push_back(w.behaviour_index("rotate90"));
  if (o.include_compound_rotations) {
    skill.preparatory.push_back(w.behaviour_index("rotate180"));
    skill.preparatory.push_back(w.behaviour_index("rotate270"));
  }
  skill.preparatory.push_back(w.behaviour_index("flip"));
  for (std::size_t d = 0; d < o.num_distractors; ++d) {
    skill.preparatory.push_back(w.behaviour_index("distractor" + std::to_string(d)));
  }
  w.skills.push_back(std::move(skill));
  w.validate();
  return w;
}

WorldSpec make_tower_world(const TowerWorldOptions& o) {
  constexpr std::size_t kStates = 4;
  WorldSpec w;
  w.name = "tower";
  w.latent_states = {"h0", "h1", "h2", "h3"};
  w.behaviours.push_back(identity_behaviour("void", kStates, o.controller_success));
  // Removes the top box.
  w.behaviours.push_back({"simple_placement", {0, 0, 1, 2}, o.controller_success, Grasp::neutral});
  // Destructive: puts every box back, whatever was there.
  w.behaviours.push_back({"shelf_placement", {3, 3, 3, 3}, o.controller_success, Grasp::neutral});
  // Destructive: restacks an empty or single-box table to two boxes, drops one from h2.
  w.behaviours.push_back({"shelf_alignment", {2, 2, 1, 3}, o.controller_success, Grasp::neutral});
  w.behaviours.push_back(identity_behaviour("finish", kStates, o.basic_success));

  w.sensing.push_back(diagonal_sensing("poke", kStates, o.poke_accuracy));
  w.sensing.push_back(no_sensing(kStates));

  WorldSkill skill{"disassemble", w.behaviour_index("finish"), {true, false, false, false}, {0, 1, 2, 3}, false};
  w.skills.push_back(std::move(skill));
  w.validate();
  return w;
}

namespace {

std::size_t state_ref(const nlohmann::json& j, const WorldSpec& w) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  const auto name = j.get<std::string>();
  for (std::size_t i = 0; i < w.latent_states.size(); ++i) {
    if (w.latent_states[i] == name) return i;
  }
  throw Error("unknown latent state '" + name + "'");
}

}  // namespace

WorldSpec parse_world(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("world file is not valid JSON: ") + e.what());
  }
  try {
    WorldSpec w;
    w.name = doc.value("name", std::string("custom"));
    w.latent_states = doc.at("states").get<std::vector<std::string>>();
    for (const auto& jb : doc.at("behaviours")) {
      WorldBehaviour b;
      b.name = jb.at("name").get<std::string>();
      for (const auto& t : jb.at("table")) b.table.push_back(state_ref(t, w));
      b.success_rate = jb.value("success_rate", 1.0);
      b.grasp = parse_grasp(jb.value("grasp", std::string("neutral")));
      w.behaviours.push_back(std::move(b));
    }
    for (const auto& js : doc.at("sensing")) {
      WorldSensing s;
      s.name = js.at("name").get<std::string>();
      s.confusion = js.at("confusion").get<std::vector<std::vector<double>>>();
      s.grasp_requirement = parse_grasp(js.value("grasp_requirement", std::string("neutral")));
      if (js.contains("accuracy")) s.fixed_accuracy = js.at("accuracy").get<double>();
      w.sensing.push_back(std::move(s));
    }
    for (const auto& jk : doc.at("skills")) {
      WorldSkill k;
      k.name = jk.at("name").get<std::string>();
      k.basic_behaviour = w.behaviour_index(jk.at("basic").get<std::string>());
      k.success.assign(w.latent_count(), false);
      for (const auto& st : jk.at("success_states")) k.success.at(state_ref(st, w)) = true;
      for (const auto& p : jk.at("preparatory")) k.preparatory.push_back(w.behaviour_index(p.get<std::string>()));
      k.requires_grasp = jk.value("requires_grasp", false);
      w.skills.push_back(std::move(k));
    }
    w.validate();
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed world definition: ") + e.what());
  }
}

WorldSpec load_world(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open world file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_world(buf.str());
}

double calibrate_sensing_accuracy(const WorldSpec& spec, std::size_t sensing) {
  const auto& s = spec.sensing.at(sensing);
  if (s.fixed_accuracy) return *s.fixed_accuracy;
  double diag = 0.0;
  for (std::size_t l = 0; l < s.confusion.size(); ++l) diag += s.confusion[l][l];
  return diag / static_cast<double>(s.confusion.size());
}

WorldInstance::WorldInstance(std::shared_ptr<const WorldSpec> spec, std::uint64_t seed)
    : spec_(std::move(spec)), rng_(seed) {
  if (!spec_) throw Error("world instance without a spec");
}

void WorldInstance::reset(std::size_t latent) {
  if (latent >= spec_->latent_count()) throw Error("latent state out of range");
  latent_ = latent;
}

void WorldInstance::reset_uniform() { latent_ = rng_.below(spec_->latent_count()); }

void WorldInstance::apply_behaviour(std::size_t behaviour) {
  if (behaviour >= spec_->behaviours.size()) {
    throw Error("unknown behaviour " + std::to_string(behaviour));
  }
  const auto& b = spec_->behaviours[behaviour];
  if (rng_.uniform() < b.success_rate) {
    latent_ = b.table[latent_];
  } else {
    latent_ = rng_.below(spec_->latent_count());
  }
}

std::size_t WorldInstance::sense(std::size_t sensing) {
  if (sensing >= spec_->sensing.size()) throw Error("unknown sensing action " + std::to_string(sensing));
  const auto& row = spec_->sensing[sensing].confusion[latent_];
  const double u = rng_.uniform();
  double acc = 0.0;
  for (std::size_t p = 0; p < row.size(); ++p) {
    acc += row[p];
    if (u < acc) return p;
  }
  for (std::size_t p = row.size(); p-- > 0;) {
    if (row[p] > 0.0) return p;
  }
  return 0;
}

bool WorldInstance::evaluate_success(std::size_t skill) {
  const auto& sk = spec_->skills.at(skill);
  const auto& basic = spec_->behaviours[sk.basic_behaviour];
  if (!(rng_.uniform() < basic.success_rate)) {
    latent_ = rng_.below(spec_->latent_count());
    return false;
  }
  latent_ = basic.table[latent_];
  return sk.success[latent_];
}

}  // namespace playlearn
