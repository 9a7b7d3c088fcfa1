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

// World-frame gait integration and turning metrics.
//
// Each step solves the quasi-static balance for the body velocity at the
// step midpoint and advances the pose by the exact SE(2) exponential, so
// rotations accumulate without drift and the stepper converges at second
// order in the step size.

#ifndef OMEGATURN_CORE_TRAJECTORY_HPP_
#define OMEGATURN_CORE_TRAJECTORY_HPP_

#include <functional>
#include <string>
#include <vector>

#include "core/chain.hpp"
#include "core/drag.hpp"
#include "core/gait.hpp"
#include "core/se2.hpp"

namespace omegaturn {

struct TrajectorySample {
  double t = 0.0;
  Se2 pose;           // world pose of the body frame, heading unwrapped
  JointVector shape;  // joint angles at t
};

struct Trajectory {
  std::vector<TrajectorySample> samples;  // strictly increasing t
  double period = 0.0;                    // gait cycle, s
  int steps_per_cycle = 0;
  int cycles = 0;
};

struct TurnMetrics {
  double angular_displacement_deg = 0.0;  // per cycle
  double swept_area_bl2 = 0.0;            // convex hull per cycle, averaged
  double translation_drift_bl = 0.0;      // per cycle
};

// Shape and shape rate at a given time; the hook lets the compliant and
// multi-legged integrators reuse the stepper.
using GaitFunction =
    std::function<void(double t, JointVector& shape, JointVector& rate)>;

Trajectory integrate_gait_function(const GaitFunction& gait, double period,
                                   const ChainGeometry& geom,
                                   const FrictionModel& model,
                                   int steps_per_cycle, int cycles,
                                   const Se2& start = {});

Trajectory integrate_gait(const TwoWaveDesign& design, const ChainGeometry& geom,
                          const FrictionModel& model, int steps_per_cycle = 400,
                          int cycles = 3, const Se2& start = {});

// Unwrapped world heading change per cycle, averaged over full cycles.
double angular_displacement_deg(const Trajectory& traj);

// Convex hull of all link corner points over one cycle, normalized by the
// squared body length; averaged over the available full cycles.
double swept_area_bl2(const Trajectory& traj, const ChainGeometry& geom);

double translation_drift_bl(const Trajectory& traj, const ChainGeometry& geom);

TurnMetrics turn_metrics(const Trajectory& traj, const ChainGeometry& geom);

// Monotone-chain convex hull area (exposed for tests).
double convex_hull_area(std::vector<Eigen::Vector2d> points);

struct SweepRow {
  TwoWaveDesign design;
  TurnMetrics metrics;
  FeasibilityCertificate certificate;
  bool ok = false;
  std::string error;
};

// One row per design, deterministic order, failures recorded per row.
std::vector<SweepRow> sweep(const std::vector<TwoWaveDesign>& designs,
                            const ChainGeometry& geom, const FrictionModel& model,
                            int steps_per_cycle = 400, int cycles = 3);

}  // namespace omegaturn

#endif  // OMEGATURN_CORE_TRAJECTORY_HPP_
