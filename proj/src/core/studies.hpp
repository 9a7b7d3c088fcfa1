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

// Study orchestration: each function runs one experiment protocol from a
// RunConfig and writes CSV/JSON/SVG results into an output directory.
// Outputs are deterministic for a fixed config (the seed drives only the
// peg-board origin draws).

#ifndef OMEGATURN_CORE_STUDIES_HPP_
#define OMEGATURN_CORE_STUDIES_HPP_

#include <filesystem>

#include "core/config.hpp"
#include "core/optimizer.hpp"

namespace omegaturn {

// Deterministic multi-start: optimizes the two-wave family (k_f, k_o,
// theta_max, omega taken from `family`) from the configured grid of
// (gamma, psi) seeds and returns the best report.
OptimizationReport optimize_seeded(const TwoWaveDesign& family,
                                   const RunConfig& cfg,
                                   const ChainGeometry& geom);

void run_simulate(const RunConfig& cfg, const std::filesystem::path& out);
void run_sweep(const RunConfig& cfg, const std::filesystem::path& out);
void run_height(const RunConfig& cfg, const std::filesystem::path& out);
void run_optimize(const RunConfig& cfg, const std::filesystem::path& out);
void run_compliant(const RunConfig& cfg, const std::filesystem::path& out);
void run_multileg(const RunConfig& cfg, const std::filesystem::path& out);
void run_report(const RunConfig& cfg, const std::filesystem::path& out);

// Structured results reused by the acceptance suite.
struct SweepPoint {
  double value = 0.0;
  TwoWaveDesign design;
  double objective_deg = 0.0;          // optimizer objective (1 cycle)
  TurnMetrics metrics;                 // at the configured metric resolution
  FeasibilityCertificate certificate;
  bool ok = false;
  std::string error;
};

std::vector<SweepPoint> sweep_study(const RunConfig& cfg);

struct CompliantCell {
  double spacing_bl = 0.0;
  int trial = 0;
  bool compliant = false;
  double angular_displacement_deg = 0.0;
  double swept_area_bl2 = 0.0;
};

std::vector<CompliantCell> compliant_study(const RunConfig& cfg);

}  // namespace omegaturn

#endif  // OMEGATURN_CORE_STUDIES_HPP_
