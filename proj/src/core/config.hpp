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

// Run configuration: one JSON document drives every subcommand. All keys
// are optional with documented defaults, unknown keys are rejected, angles
// are degrees on the wire and radians in memory. The canonical serialized
// form (sorted keys, defaults materialized) is hashed into every output
// file for provenance.

#ifndef OMEGATURN_CORE_CONFIG_HPP_
#define OMEGATURN_CORE_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "core/chain.hpp"
#include "core/compliance.hpp"
#include "core/drag.hpp"
#include "core/gait.hpp"
#include "core/multileg.hpp"
#include "core/optimizer.hpp"

namespace omegaturn {

struct SimulateConfig {
  int steps_per_cycle = 400;
  int cycles = 3;
};

// How the studies seed the deterministic optimizer: a fixed grid of
// (gamma, psi) starting designs, best result kept.
struct SeedProtocol {
  std::vector<double> gammas{0.1, 0.6, 1.2, 1.9};
  std::vector<double> psis{deg2rad(30), deg2rad(90), deg2rad(150),
                           deg2rad(210), deg2rad(270), deg2rad(330)};
  double gain = deg2rad(25.0);
};

struct SweepConfig {
  std::string parameter = "k_o";  // k_o | theta_max | k_f | num_joints
  std::vector<double> values{0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
  bool optimize_each = true;
  bool k_o_tracks_k_f = false;  // for k_f sweeps of the k_o = k_f family
};

struct HeightConfig {
  int grid_cells = 129;
  std::vector<std::string> spaces{"tau_o_amp_o", "tau_f_amp_f", "tau_f_tau_o"};
};

struct PegboardConfig {
  std::vector<double> spacing_bl{0.3, 0.45, 0.6};
  double peg_radius = 0.015;  // m
  int trials = 5;
  double contact_stiffness = 50.0;  // N/m
  AdmittanceParams admittance;
  int steps_per_cycle = 400;
  int cycles = 3;
};

struct MultilegConfig {
  MultilegGeometry geometry;
  double omega = 0.1;  // cycles/s
  std::vector<double> a3_values{0.0, deg2rad(5), deg2rad(10), deg2rad(15),
                                deg2rad(20)};
  double w3_max = deg2rad(30.0);
  int grid_cells = 49;
  int steps_per_cycle = 400;
  int cycles = 1;
};

struct RunConfig {
  int schema_version = 1;
  uint64_t seed = 1;
  ChainGeometry geometry;
  FrictionModel friction;
  TwoWaveDesign gait = default_gait();
  SimulateConfig simulate;
  OptimizerConfig optimizer;
  SeedProtocol seeds;
  SweepConfig sweep;
  HeightConfig height;
  PegboardConfig pegboard;
  MultilegConfig multileg;

  static TwoWaveDesign default_gait();

  // Canonical serialized form: all keys present, sorted, degrees on the
  // wire. parse(canonical_json()) reproduces the config exactly.
  std::string canonical_json() const;
  std::string hash() const;

  // Throws ConfigError on syntax errors, unknown keys, or invalid values.
  static RunConfig parse(const std::string& json_text);
  static RunConfig load(const std::filesystem::path& path);
};

// Applies a dotted-path override ("friction.mu=0.5") to a JSON document
// string and returns the updated document. Throws ConfigError on paths
// that do not name an existing config key.
std::string apply_override(const std::string& json_text, const std::string& key,
                           const std::string& value);

}  // namespace omegaturn

#endif  // OMEGATURN_CORE_CONFIG_HPP_
