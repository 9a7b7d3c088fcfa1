// Copyright 2026 The omegaturn Authors
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

#include "core/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "core/errors.hpp"
#include "core/io.hpp"

namespace omegaturn {
namespace {

using nlohmann::json;

// Strict block reader: every key consumed must be declared. Holds its own
// copy of the block so callers may pass temporaries.
class Block {
 public:
  Block(json j, std::string path) : j_(std::move(j)), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  template <class T>
  void read(const char* key, T& out) {
    known_.push_back(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(path_ + "." + key + ": " + e.what());
    }
  }

  void read_deg(const char* key, double& out_rad) {
    double deg = rad2deg(out_rad);
    read(key, deg);
    out_rad = deg2rad(deg);
  }

  void read_deg_list(const char* key, std::vector<double>& out_rad) {
    std::vector<double> deg;
    deg.reserve(out_rad.size());
    for (double v : out_rad) deg.push_back(rad2deg(v));
    read(key, deg);
    out_rad.clear();
    for (double v : deg) out_rad.push_back(deg2rad(v));
  }

  // Sub-object access; absent blocks yield an empty object.
  json sub(const char* key) {
    known_.push_back(key);
    if (!j_.contains(key)) return json::object();
    return j_.at(key);
  }

  // Call after all reads: rejects unknown keys.
  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      bool ok = false;
      for (const auto& k : known_) ok |= (key == k);
      if (!ok) throw ConfigError(path_ + ": unknown key '" + key + "'");
    }
  }

 private:
  json j_;
  std::string path_;
  std::vector<std::string> known_;
};

void parse_gait_block(const json& j, TwoWaveDesign& d) {
  double a_f = rad2deg(d.forward_profile.gain);
  double phi_f = rad2deg(d.forward_profile.phase);
  double a_o = rad2deg(d.turning_profile.gain);
  double phi_o = rad2deg(d.turning_profile.phase);
  double psi = rad2deg(d.psi);
  double theta_max = rad2deg(d.theta_max);

  Block strict(j, "gait");
  strict.read("a_f", a_f);
  strict.read("gamma", d.forward_profile.bias);
  strict.read("phi_f", phi_f);
  strict.read("a_o", a_o);
  strict.read("phi_o", phi_o);
  strict.read("k_f", d.k_f);
  strict.read("k_o", d.k_o);
  strict.read("psi", psi);
  strict.read("omega", d.omega);
  strict.read("theta_max", theta_max);
  strict.finish();

  d.forward_profile.gain = deg2rad(a_f);
  d.forward_profile.phase = deg2rad(phi_f);
  d.turning_profile.gain = deg2rad(a_o);
  d.turning_profile.bias = 1.0;
  d.turning_profile.phase = deg2rad(phi_o);
  d.psi = deg2rad(psi);
  d.theta_max = deg2rad(theta_max);
  d.validate();
}

json gait_to_json(const TwoWaveDesign& d) {
  json j;
  j["a_f"] = rad2deg(d.forward_profile.gain);
  j["gamma"] = d.forward_profile.bias;
  j["phi_f"] = rad2deg(d.forward_profile.phase);
  j["a_o"] = rad2deg(d.turning_profile.gain);
  j["phi_o"] = rad2deg(d.turning_profile.phase);
  j["k_f"] = d.k_f;
  j["k_o"] = d.k_o;
  j["psi"] = rad2deg(d.psi);
  j["omega"] = d.omega;
  j["theta_max"] = rad2deg(d.theta_max);
  return j;
}

}  // namespace

TwoWaveDesign RunConfig::default_gait() {
  TwoWaveDesign d;
  d.forward_profile = {deg2rad(25.0), 1.0, 0.0};
  d.turning_profile = {deg2rad(25.0), 1.0, 0.0};
  d.k_f = 1.5;
  d.k_o = 1.0;
  d.psi = deg2rad(90.0);
  d.omega = 0.1;
  d.theta_max = deg2rad(90.0);
  return d;
}

RunConfig RunConfig::parse(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");

  RunConfig cfg;
  Block root(doc, "config");
  root.read("schema_version", cfg.schema_version);
  if (cfg.schema_version != 1) {
    throw ConfigError("config: unsupported schema_version");
  }
  root.read("seed", cfg.seed);

  {
    Block b(root.sub("geometry"), "geometry");
    b.read("num_joints", cfg.geometry.num_joints);
    b.read("link_length_m", cfg.geometry.link_length);
    b.read("link_width_m", cfg.geometry.link_width);
    b.finish();
    cfg.geometry.validate();
  }
  {
    Block b(root.sub("friction"), "friction");
    b.read("mu", cfg.friction.mu);
    b.read("epsilon", cfg.friction.epsilon);
    b.read("samples_per_link", cfg.friction.samples_per_link);
    b.finish();
    cfg.friction.validate();
  }
  parse_gait_block(root.sub("gait"), cfg.gait);
  {
    Block b(root.sub("simulate"), "simulate");
    b.read("steps_per_cycle", cfg.simulate.steps_per_cycle);
    b.read("cycles", cfg.simulate.cycles);
    b.finish();
    if (cfg.simulate.steps_per_cycle < 100 || cfg.simulate.cycles < 1) {
      throw ConfigError("simulate: steps_per_cycle >= 100 and cycles >= 1 required");
    }
  }
  {
    Block b(root.sub("optimizer"), "optimizer");
    b.read("grid_cells", cfg.optimizer.grid_cells);
    b.read("phase_samples", cfg.optimizer.phase_samples);
    b.read("objective_steps", cfg.optimizer.objective_steps);
    b.read("coarse_points", cfg.optimizer.coarse_points);
    b.read("top_candidates", cfg.optimizer.top_candidates);
    b.read("path_samples", cfg.optimizer.path_samples);
    b.read("tol_deg", cfg.optimizer.tol_deg);
    b.read("max_outer", cfg.optimizer.max_outer);
    double max_gain_deg = rad2deg(cfg.optimizer.max_gain);
    b.read("max_gain_deg", max_gain_deg);
    cfg.optimizer.max_gain = deg2rad(max_gain_deg);
    b.read("max_bias", cfg.optimizer.max_bias);
    b.read_deg_list("seed_psis_deg", cfg.seeds.psis);
    b.read("seed_gammas", cfg.seeds.gammas);
    b.read_deg("seed_gain_deg", cfg.seeds.gain);
    b.finish();
    cfg.optimizer.validate();
    if (cfg.seeds.psis.empty() || cfg.seeds.gammas.empty()) {
      throw ConfigError("optimizer: seed lists must be non-empty");
    }
  }
  {
    Block b(root.sub("sweep"), "sweep");
    b.read("parameter", cfg.sweep.parameter);
    b.read("values", cfg.sweep.values);
    b.read("optimize_each", cfg.sweep.optimize_each);
    b.read("k_o_tracks_k_f", cfg.sweep.k_o_tracks_k_f);
    b.finish();
    const std::string& p = cfg.sweep.parameter;
    if (p != "k_o" && p != "theta_max" && p != "k_f" && p != "num_joints") {
      throw ConfigError("sweep: parameter must be one of k_o, theta_max, k_f, num_joints");
    }
    if (cfg.sweep.values.empty()) throw ConfigError("sweep: values must be non-empty");
  }
  {
    Block b(root.sub("height"), "height");
    b.read("grid_cells", cfg.height.grid_cells);
    b.read("spaces", cfg.height.spaces);
    b.finish();
    for (const auto& s : cfg.height.spaces) {
      if (s != "tau_o_amp_o" && s != "tau_f_amp_f" && s != "tau_f_tau_o") {
        throw ConfigError("height: unknown space '" + s + "'");
      }
    }
  }
  {
    const json sub = root.sub("pegboard");
    Block b(sub, "pegboard");
    b.read("spacing_bl", cfg.pegboard.spacing_bl);
    b.read("peg_radius_m", cfg.pegboard.peg_radius);
    b.read("trials", cfg.pegboard.trials);
    b.read("contact_stiffness", cfg.pegboard.contact_stiffness);
    b.read("steps_per_cycle", cfg.pegboard.steps_per_cycle);
    b.read("cycles", cfg.pegboard.cycles);
    {
      Block a(b.sub("admittance"), "pegboard.admittance");
      std::vector<double> mass{cfg.pegboard.admittance.mass[0],
                               cfg.pegboard.admittance.mass[1]};
      std::vector<double> damping{cfg.pegboard.admittance.damping[0],
                                  cfg.pegboard.admittance.damping[1]};
      std::vector<double> stiffness{cfg.pegboard.admittance.stiffness[0],
                                    cfg.pegboard.admittance.stiffness[1]};
      std::vector<double> nominal{rad2deg(cfg.pegboard.admittance.nominal[0]),
                                  rad2deg(cfg.pegboard.admittance.nominal[1])};
      a.read("mass", mass);
      a.read("damping", damping);
      a.read("stiffness", stiffness);
      a.read("nominal_deg", nominal);
      a.read("control_dt", cfg.pegboard.admittance.control_dt);
      a.read("torque_scale", cfg.pegboard.admittance.torque_scale);
      a.read("torque_deadband", cfg.pegboard.admittance.torque_deadband);
      a.finish();
      if (mass.size() != 2 || damping.size() != 2 || stiffness.size() != 2 ||
          nominal.size() != 2) {
        throw ConfigError("pegboard.admittance: matrices are 2-element diagonals");
      }
      cfg.pegboard.admittance.mass = {mass[0], mass[1]};
      cfg.pegboard.admittance.damping = {damping[0], damping[1]};
      cfg.pegboard.admittance.stiffness = {stiffness[0], stiffness[1]};
      cfg.pegboard.admittance.nominal = {deg2rad(nominal[0]), deg2rad(nominal[1])};
      cfg.pegboard.admittance.validate();
    }
    b.finish();
    if (cfg.pegboard.trials < 1) throw ConfigError("pegboard: trials >= 1 required");
  }
  {
    const json sub = root.sub("multileg");
    Block b(sub, "multileg");
    MultilegGeometry& g = cfg.multileg.geometry;
    b.read("segments", g.segments);
    b.read("segment_length_m", g.segment_length);
    b.read("leg_offset_m", g.leg_offset);
    b.read("leg_length_m", g.leg_length);
    b.read_deg("body_amplitude_deg", g.body_amplitude);
    b.read_deg("leg_amplitude_deg", g.leg_amplitude);
    b.read("duty_factor", g.duty_factor);
    b.read_deg("contact_phase_deg", g.contact_phase);
    b.read("paired_contact", g.paired_contact);
    b.read("paired_protraction", g.paired_protraction);
    b.read("mu_leg", g.mu_leg);
    b.read("mu_body", g.mu_body);
    b.read("omega", cfg.multileg.omega);
    b.read_deg_list("a3_values_deg", cfg.multileg.a3_values);
    b.read_deg("w3_max_deg", cfg.multileg.w3_max);
    b.read("grid_cells", cfg.multileg.grid_cells);
    b.read("steps_per_cycle", cfg.multileg.steps_per_cycle);
    b.read("cycles", cfg.multileg.cycles);
    b.finish();
    g.validate();
  }
  root.finish();
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::canonical_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["seed"] = seed;
  j["geometry"] = {{"num_joints", geometry.num_joints},
                   {"link_length_m", geometry.link_length},
                   {"link_width_m", geometry.link_width}};
  j["friction"] = {{"mu", friction.mu},
                   {"epsilon", friction.epsilon},
                   {"samples_per_link", friction.samples_per_link}};
  j["gait"] = gait_to_json(gait);
  j["simulate"] = {{"steps_per_cycle", simulate.steps_per_cycle},
                   {"cycles", simulate.cycles}};
  std::vector<double> psis_deg;
  for (double p : seeds.psis) psis_deg.push_back(rad2deg(p));
  j["optimizer"] = {{"grid_cells", optimizer.grid_cells},
                    {"phase_samples", optimizer.phase_samples},
                    {"objective_steps", optimizer.objective_steps},
                    {"coarse_points", optimizer.coarse_points},
                    {"top_candidates", optimizer.top_candidates},
                    {"path_samples", optimizer.path_samples},
                    {"tol_deg", optimizer.tol_deg},
                    {"max_outer", optimizer.max_outer},
                    {"max_gain_deg", rad2deg(optimizer.max_gain)},
                    {"max_bias", optimizer.max_bias},
                    {"seed_psis_deg", psis_deg},
                    {"seed_gammas", seeds.gammas},
                    {"seed_gain_deg", rad2deg(seeds.gain)}};
  j["sweep"] = {{"parameter", sweep.parameter},
                {"values", sweep.values},
                {"optimize_each", sweep.optimize_each},
                {"k_o_tracks_k_f", sweep.k_o_tracks_k_f}};
  j["height"] = {{"grid_cells", height.grid_cells}, {"spaces", height.spaces}};
  j["pegboard"] = {
      {"spacing_bl", pegboard.spacing_bl},
      {"peg_radius_m", pegboard.peg_radius},
      {"trials", pegboard.trials},
      {"contact_stiffness", pegboard.contact_stiffness},
      {"steps_per_cycle", pegboard.steps_per_cycle},
      {"cycles", pegboard.cycles},
      {"admittance",
       {{"mass", {pegboard.admittance.mass[0], pegboard.admittance.mass[1]}},
        {"damping",
         {pegboard.admittance.damping[0], pegboard.admittance.damping[1]}},
        {"stiffness",
         {pegboard.admittance.stiffness[0], pegboard.admittance.stiffness[1]}},
        {"nominal_deg",
         {rad2deg(pegboard.admittance.nominal[0]),
          rad2deg(pegboard.admittance.nominal[1])}},
        {"control_dt", pegboard.admittance.control_dt},
        {"torque_scale", pegboard.admittance.torque_scale},
        {"torque_deadband", pegboard.admittance.torque_deadband}}}};
  std::vector<double> a3_deg;
  for (double a : multileg.a3_values) a3_deg.push_back(rad2deg(a));
  j["multileg"] = {{"segments", multileg.geometry.segments},
                   {"segment_length_m", multileg.geometry.segment_length},
                   {"leg_offset_m", multileg.geometry.leg_offset},
                   {"leg_length_m", multileg.geometry.leg_length},
                   {"body_amplitude_deg", rad2deg(multileg.geometry.body_amplitude)},
                   {"leg_amplitude_deg", rad2deg(multileg.geometry.leg_amplitude)},
                   {"duty_factor", multileg.geometry.duty_factor},
                   {"contact_phase_deg", rad2deg(multileg.geometry.contact_phase)},
                   {"paired_contact", multileg.geometry.paired_contact},
                   {"paired_protraction", multileg.geometry.paired_protraction},
                   {"mu_leg", multileg.geometry.mu_leg},
                   {"mu_body", multileg.geometry.mu_body},
                   {"omega", multileg.omega},
                   {"a3_values_deg", a3_deg},
                   {"w3_max_deg", rad2deg(multileg.w3_max)},
                   {"grid_cells", multileg.grid_cells},
                   {"steps_per_cycle", multileg.steps_per_cycle},
                   {"cycles", multileg.cycles}};
  return j.dump(2);
}

std::string RunConfig::hash() const { return fnv1a_hex(canonical_json()); }

std::string apply_override(const std::string& json_text, const std::string& key,
                           const std::string& value) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  // Dotted path -> JSON pointer.
  std::string pointer;
  std::string part;
  std::stringstream path(key);
  while (std::getline(path, part, '.')) {
    if (part.empty()) throw ConfigError("override: empty path segment in '" + key + "'");
    pointer += "/" + part;
  }
  if (pointer.empty()) throw ConfigError("override: empty key");

  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;  // plain string
  }
  doc[json::json_pointer(pointer)] = parsed;
  return doc.dump();
}

}  // namespace omegaturn
