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

// Hierarchical gait optimization over the two-wave family.
//
// The outer loop sweeps the three profile functions in turn: the turning
// profile (a_o, phi_o) over the (tau_o, A_o) sub-shape space, the forward
// profile (a_f, gamma, phi_f) over (tau_f, A_f), and the wave phase lag psi
// over the (tau_f, tau_o) torus. Each sweep grids the function's bounded
// parameters, scores every candidate path by the rotational height-function
// surface integral on that sub-shape space (feasibility-masked), refines the
// grid once around the best-scoring candidate, then simulates the top scored
// candidates and accepts one only if the true per-cycle turning improves.
// The surface integral is a guide, not ground truth: the reduced connection
// superposes Coulomb drag only approximately, so acceptance always runs the
// full quasi-static simulation.

#ifndef OMEGATURN_CORE_OPTIMIZER_HPP_
#define OMEGATURN_CORE_OPTIMIZER_HPP_

#include <vector>

#include "core/geomech.hpp"
#include "core/trajectory.hpp"

namespace omegaturn {

struct OptimizerConfig {
  int grid_cells = 49;       // nodes per sub-shape-space axis
  int phase_samples = 200;   // feasibility samples per gait cycle
  int objective_steps = 200; // integrator steps for the acceptance objective
  int coarse_points = 9;     // candidate values per scalar parameter
  int top_candidates = 12;   // best-scored candidates simulated per sweep
  int path_samples = 128;    // samples per candidate gait path
  double tol_deg = 0.25;     // stop when an outer cycle gains less than this
  int max_outer = 12;
  double max_gain = 2.0;     // rad, bound on a_f and a_o
  double max_bias = 2.0;     // bound on gamma

  void validate() const;
};

struct OptimizationReport {
  TwoWaveDesign best;
  double objective_deg = 0.0;
  std::vector<double> objective_trace;  // value after each outer iteration
  FeasibilityCertificate certificate;
  int outer_iterations = 0;
};

// Signed turning per cycle (counter-clockwise positive); a large negative
// penalty stands in for infeasible or non-converging designs.
double turning_objective(const TwoWaveDesign& design, const ChainGeometry& geom,
                         const FrictionModel& model, const OptimizerConfig& cfg);

inline constexpr double kInfeasiblePenalty = -1e9;

// Throws NoFeasibleStartError when neither the initial design nor any
// candidate of the first outer iteration is feasible.
OptimizationReport optimize(const TwoWaveDesign& initial,
                            const OptimizerConfig& cfg,
                            const ChainGeometry& geom,
                            const FrictionModel& model);

}  // namespace omegaturn

#endif  // OMEGATURN_CORE_OPTIMIZER_HPP_
