// Copyright 2026 The uavsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uavsim/config.hpp"

#include <array>
#include <fstream>
#include <set>

namespace uavsim {

using nlohmann::json;

namespace {

/// Reads keys from one JSON object and rejects anything it was not asked for.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  template <class T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(path_ + "." + key + ": " + e.what());
    }
  }

  void readPosition(const char* key, Position& out, bool groundOnly) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    const std::size_t want = groundOnly ? 2 : 3;
    if (!it->is_array() || it->size() != want) {
      throw ConfigError(path_ + "." + key + ": expected an array of " + std::to_string(want) + " numbers");
    }
    out = Position((*it)[0].get<double>(), (*it)[1].get<double>(), groundOnly ? 0.0 : (*it)[2].get<double>());
  }

  const json* child(const char* key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void requirePresent(const char* key) const {
    if (!obj_.contains(key)) throw ConfigError(path_ + "." + key + ": required key missing");
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(path_ + ": unknown key '" + it.key() + "'");
    }
  }

  const std::string& path() const { return path_; }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void parse_learning(const json& obj, LearningParams& p) {
  Section s(obj, "run.learning");
  s.read("alpha", p.alpha);
  s.read("alpha_decay", p.alphaDecay);
  s.read("epsilon_start", p.epsilonStart);
  s.read("epsilon_end", p.epsilonEnd);
  s.read("bandit_epsilon_start", p.banditEpsilonStart);
  s.read("bandit_epsilon_end", p.banditEpsilonEnd);
  s.read("actor_step", p.actorStep);
  s.read("critic_step", p.criticStep);
  s.read("actor_std_start_db", p.actorStdStartDb);
  s.read("actor_std_end_db", p.actorStdEndDb);
  s.read("pathloss_ref_db", p.pathlossRefDb);
  s.read("pathloss_scale_db", p.pathlossScaleDb);
  s.read("dqn_hidden", p.dqnHidden);
  s.read("dqn_buffer_capacity", p.dqnBufferCapacity);
  s.read("dqn_batch_size", p.dqnBatchSize);
  s.read("dqn_target_sync", p.dqnTargetSync);
  s.read("dqn_step_size", p.dqnStepSize);
  s.read("dqn_epsilon_start", p.dqnEpsilonStart);
  s.read("dqn_epsilon_end", p.dqnEpsilonEnd);
  s.finish();
}

json learning_json(const LearningParams& p) {
  return {{"alpha", p.alpha},
          {"alpha_decay", p.alphaDecay},
          {"epsilon_start", p.epsilonStart},
          {"epsilon_end", p.epsilonEnd},
          {"bandit_epsilon_start", p.banditEpsilonStart},
          {"bandit_epsilon_end", p.banditEpsilonEnd},
          {"actor_step", p.actorStep},
          {"critic_step", p.criticStep},
          {"actor_std_start_db", p.actorStdStartDb},
          {"actor_std_end_db", p.actorStdEndDb},
          {"pathloss_ref_db", p.pathlossRefDb},
          {"pathloss_scale_db", p.pathlossScaleDb},
          {"dqn_hidden", p.dqnHidden},
          {"dqn_buffer_capacity", p.dqnBufferCapacity},
          {"dqn_batch_size", p.dqnBatchSize},
          {"dqn_target_sync", p.dqnTargetSync},
          {"dqn_step_size", p.dqnStepSize},
          {"dqn_epsilon_start", p.dqnEpsilonStart},
          {"dqn_epsilon_end", p.dqnEpsilonEnd}};
}

const json& require_list(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ConfigError(std::string(key) + ": required section missing");
  if (!it->is_array()) throw ConfigError(std::string(key) + ": expected a list");
  return *it;
}

}  // namespace

ScenarioConfig parse_config(const json& doc) {
  ScenarioConfig cfg;
  Section top(doc, "config");

  if (const json* lat = top.child("lattice")) {
    Section s(*lat, "lattice");
    s.readPosition("center_m", cfg.lattice.center, true);
    s.read("radius_m", cfg.lattice.radius);
    s.read("h_min_m", cfg.lattice.hMin);
    s.read("h_max_m", cfg.lattice.hMax);
    s.read("spacing_m", cfg.lattice.spacing);
    s.finish();
  }

  if (const json* ch = top.child("channel")) {
    Section s(*ch, "channel");
    auto& p = cfg.channel;
    s.read("carrier_hz", p.carrierHz);
    s.read("eta_los_db", p.etaLosDb);
    s.read("eta_nlos_db", p.etaNlosDb);
    s.read("los_a", p.losA);
    s.read("los_b_per_deg", p.losB);
    s.read("shadow_sigma_los_db", p.shadowSigmaLosDb);
    s.read("shadow_sigma_nlos_db", p.shadowSigmaNlosDb);
    s.read("noise_dbm", p.noiseDbm);
    s.read("sinr_threshold_db", p.sinrThresholdDb);
    s.read("tx_power_min_dbm", p.txPowerMinDbm);
    s.read("tx_power_max_dbm", p.txPowerMaxDbm);
    s.finish();
  }

  top.child("bss");
  const json& bss = require_list(doc, "bss");
  for (std::size_t n = 0; n < bss.size(); ++n) {
    Section s(bss[n], "bss[" + std::to_string(n) + "]");
    s.requirePresent("id");
    s.requirePresent("position_m");
    BsSpec bs;
    s.read("id", bs.id);
    s.readPosition("position_m", bs.position, false);
    s.read("subchannels", bs.subchannels);
    s.read("band", bs.bandId);
    s.finish();
    cfg.bss.push_back(bs);
  }

  top.child("targets");
  const json& targets = require_list(doc, "targets");
  for (std::size_t n = 0; n < targets.size(); ++n) {
    Section s(targets[n], "targets[" + std::to_string(n) + "]");
    s.requirePresent("id");
    s.requirePresent("position_m");
    TargetSpec t;
    s.read("id", t.id);
    s.readPosition("position_m", t.position, false);
    s.finish();
    cfg.targets.push_back(t);
  }

  top.child("uavs");
  const json& uavs = require_list(doc, "uavs");
  for (std::size_t n = 0; n < uavs.size(); ++n) {
    Section s(uavs[n], "uavs[" + std::to_string(n) + "]");
    s.requirePresent("id");
    s.requirePresent("target");
    UavSpec u;
    s.read("id", u.id);
    s.read("target", u.targetId);
    s.read("battery_j", u.batteryCapacity);
    std::array<int, 3> start{0, 0, 0};
    s.read("start", start);
    u.start = {start[0], start[1], start[2]};
    if (const json* home = s.child("home_bs")) {
      if (!home->is_number_integer()) throw ConfigError(s.path() + ".home_bs: expected an integer");
      u.homeBsId = home->get<int>();
    }
    s.finish();
    cfg.uavs.push_back(u);
  }

  if (const json* run = top.child("run")) {
    Section s(*run, "run");
    s.read("frames_per_cycle", cfg.framesPerCycle);
    s.read("discount", cfg.discount);
    s.read("sensing_lambda_per_m", cfg.sensingLambda);
    s.read("seed", cfg.rngSeed);
    s.read("frame_duration_s", cfg.frameDurationS);
    s.read("propulsion_energy_j", cfg.propulsionEnergyJ);
    if (const json* learning = s.child("learning")) parse_learning(*learning, cfg.learning);
    s.finish();
  }
  top.finish();

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ScenarioConfig& cfg) {
  json doc;
  doc["lattice"] = {{"center_m", {cfg.lattice.center.x(), cfg.lattice.center.y()}},
                    {"radius_m", cfg.lattice.radius},
                    {"h_min_m", cfg.lattice.hMin},
                    {"h_max_m", cfg.lattice.hMax},
                    {"spacing_m", cfg.lattice.spacing}};
  const auto& p = cfg.channel;
  doc["channel"] = {{"carrier_hz", p.carrierHz},
                    {"eta_los_db", p.etaLosDb},
                    {"eta_nlos_db", p.etaNlosDb},
                    {"los_a", p.losA},
                    {"los_b_per_deg", p.losB},
                    {"shadow_sigma_los_db", p.shadowSigmaLosDb},
                    {"shadow_sigma_nlos_db", p.shadowSigmaNlosDb},
                    {"noise_dbm", p.noiseDbm},
                    {"sinr_threshold_db", p.sinrThresholdDb},
                    {"tx_power_min_dbm", p.txPowerMinDbm},
                    {"tx_power_max_dbm", p.txPowerMaxDbm}};
  doc["bss"] = json::array();
  for (const auto& bs : cfg.bss) {
    doc["bss"].push_back({{"id", bs.id},
                          {"position_m", {bs.position.x(), bs.position.y(), bs.position.z()}},
                          {"subchannels", bs.subchannels},
                          {"band", bs.bandId}});
  }
  doc["targets"] = json::array();
  for (const auto& t : cfg.targets) {
    doc["targets"].push_back({{"id", t.id}, {"position_m", {t.position.x(), t.position.y(), t.position.z()}}});
  }
  doc["uavs"] = json::array();
  for (const auto& u : cfg.uavs) {
    json item = {{"id", u.id},
                 {"start", {u.start.i, u.start.j, u.start.k}},
                 {"target", u.targetId},
                 {"battery_j", u.batteryCapacity}};
    if (u.homeBsId) item["home_bs"] = *u.homeBsId;
    doc["uavs"].push_back(item);
  }
  doc["run"] = {{"frames_per_cycle", cfg.framesPerCycle},
                {"discount", cfg.discount},
                {"sensing_lambda_per_m", cfg.sensingLambda},
                {"seed", cfg.rngSeed},
                {"frame_duration_s", cfg.frameDurationS},
                {"propulsion_energy_j", cfg.propulsionEnergyJ},
                {"learning", learning_json(cfg.learning)}};
  return doc;
}

}  // namespace uavsim
