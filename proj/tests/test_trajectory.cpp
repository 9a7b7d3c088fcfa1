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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/trajectory.hpp"

using namespace omegaturn;

namespace {

// A plausible hand-tuned turning design in the two-wave family; tests only
// rely on qualitative behavior (it turns, it repeats cycle to cycle).
TwoWaveDesign sample_design() {
  TwoWaveDesign d;
  d.forward_profile = {deg2rad(25.0), 1.0, 0.0};
  d.turning_profile = {deg2rad(25.0), 1.0, 0.0};
  d.k_f = 1.5;
  d.k_o = 1.0;
  d.psi = kPi / 2;
  d.omega = 0.1;
  return d;
}

}  // namespace

TEST_CASE("zero amplitude design leaves the pose constant") {
  ChainGeometry geom;
  FrictionModel model;
  TwoWaveDesign d = sample_design();
  d.forward_profile.gain = 0.0;
  d.turning_profile.gain = 0.0;
  const Trajectory traj = integrate_gait(d, geom, model, 100, 1);
  for (const auto& s : traj.samples) {
    CHECK(s.pose.position.norm() == 0.0);
    CHECK(s.pose.heading == 0.0);
  }
}

TEST_CASE("stepper self-convergence under step doubling") {
  ChainGeometry geom;
  FrictionModel model;
  const TwoWaveDesign d = sample_design();
  const Trajectory coarse = integrate_gait(d, geom, model, 200, 1);
  const Trajectory fine = integrate_gait(d, geom, model, 400, 1);
  const Se2 a = coarse.samples.back().pose;
  const Se2 b = fine.samples.back().pose;
  const double motion = b.position.norm() + geom.body_length();
  CHECK((a.position - b.position).norm() / motion < 1e-3);
  CHECK(std::abs(a.heading - b.heading) < 1e-3 * std::max(1.0, std::abs(b.heading)));
}

TEST_CASE("angular displacement of a pure rotation trajectory") {
  Trajectory traj;
  traj.period = 10.0;
  traj.steps_per_cycle = 100;
  traj.cycles = 1;
  Se2 pose;
  const Twist xi{{0.0, 0.0}, 0.1};
  traj.samples.push_back({0.0, pose, JointVector::Zero(8)});
  for (int i = 0; i < 100; ++i) {
    pose = pose.compose(se2_exp(xi, 0.1));
    traj.samples.push_back({0.1 * (i + 1), pose, JointVector::Zero(8)});
  }
  CHECK(angular_displacement_deg(traj) == doctest::Approx(rad2deg(1.0)).epsilon(1e-12));

  Trajectory constant;
  constant.period = 1.0;
  constant.steps_per_cycle = 1;
  constant.cycles = 1;
  constant.samples.push_back({0.0, Se2{}, JointVector::Zero(8)});
  constant.samples.push_back({1.0, Se2{}, JointVector::Zero(8)});
  CHECK(angular_displacement_deg(constant) == 0.0);
}

TEST_CASE("per-cycle displacement repeats across cycles") {
  ChainGeometry geom;
  FrictionModel model;
  const TwoWaveDesign d = sample_design();
  const Trajectory traj = integrate_gait(d, geom, model, 200, 3);
  const int spc = traj.steps_per_cycle;
  double prev = 0.0;
  for (int c = 0; c < 3; ++c) {
    const double delta = rad2deg(traj.samples[size_t(spc) * (c + 1)].pose.heading -
                                 traj.samples[size_t(spc) * c].pose.heading);
    if (c > 0) CHECK(std::abs(delta - prev) < 2.0);
    prev = delta;
  }
}

TEST_CASE("per-cycle displacement is invariant to temporal frequency") {
  ChainGeometry geom;
  FrictionModel model;
  TwoWaveDesign d = sample_design();
  const Trajectory slow = integrate_gait(d, geom, model, 200, 1);
  d.omega = 0.2;
  const Trajectory fast = integrate_gait(d, geom, model, 200, 1);
  const double a = angular_displacement_deg(slow);
  const double b = angular_displacement_deg(fast);
  CHECK(std::abs(a - b) <= 0.005 * std::abs(a));
}

TEST_CASE("per-cycle displacement is invariant to mu") {
  ChainGeometry geom;
  const TwoWaveDesign d = sample_design();
  double base = 0.0;
  bool first = true;
  for (double mu : {0.1, 0.3, 1.0}) {
    FrictionModel model;
    model.mu = mu;
    const double delta =
        angular_displacement_deg(integrate_gait(d, geom, model, 200, 1));
    if (first) {
      base = delta;
      first = false;
    } else {
      CHECK(std::abs(delta - base) <= 0.005 * std::abs(base));
    }
  }
}

TEST_CASE("mirrored design negates the turn") {
  ChainGeometry geom;
  FrictionModel model;
  const TwoWaveDesign d = sample_design();
  const double fwd = angular_displacement_deg(integrate_gait(d, geom, model, 200, 1));
  const double rev =
      angular_displacement_deg(integrate_gait(mirrored(d), geom, model, 200, 1));
  CHECK(std::abs(fwd + rev) <= 0.01 * std::abs(fwd));
  CHECK(std::abs(fwd) > 5.0);  // the sample design actually turns
}

TEST_CASE("rerunning from a displaced start applies a rigid transform") {
  ChainGeometry geom;
  FrictionModel model;
  const TwoWaveDesign d = sample_design();
  const Trajectory base = integrate_gait(d, geom, model, 150, 1);

  Se2 start;
  start.position = {0.37, -0.21};
  start.heading = 0.83;
  const Trajectory moved = integrate_gait(d, geom, model, 150, 1, start);

  for (size_t i = 0; i < base.samples.size(); ++i) {
    const Se2 expect = start.compose(base.samples[i].pose);
    const Se2& got = moved.samples[i].pose;
    CHECK((expect.position - got.position).norm() < 1e-9);
    CHECK(std::abs(expect.heading - got.heading) < 1e-9);
  }
}

TEST_CASE("convex hull area basics") {
  std::vector<Eigen::Vector2d> square = {
      {0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.5, 0.5}};
  CHECK(convex_hull_area(square) == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<Eigen::Vector2d> line = {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
  CHECK(convex_hull_area(line) == 0.0);
}

TEST_CASE("static straight body sweeps exactly its own rectangle") {
  ChainGeometry geom;
  FrictionModel model;
  TwoWaveDesign d = sample_design();
  d.forward_profile.gain = 0.0;
  d.turning_profile.gain = 0.0;
  const Trajectory traj = integrate_gait(d, geom, model, 100, 1);
  const double want = geom.body_length() * geom.link_width /
                      (geom.body_length() * geom.body_length());
  CHECK(swept_area_bl2(traj, geom) == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("sweep records one row per design and captures failures") {
  ChainGeometry geom;
  FrictionModel model;
  TwoWaveDesign good = sample_design();
  TwoWaveDesign bad = sample_design();
  bad.k_f = 0.0;  // rejected by validation inside the integrator

  const auto rows = sweep({good, bad}, geom, model, 150, 1);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].ok);
  CHECK(rows[0].metrics.swept_area_bl2 > 0.0);
  CHECK(rows[0].certificate.ok());
  CHECK_FALSE(rows[1].ok);
  CHECK_FALSE(rows[1].error.empty());
}
