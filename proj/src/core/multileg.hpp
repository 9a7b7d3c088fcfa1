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

// Elongate multi-legged robot turning over the (phi, w3) shape space.
//
// The configuration superposes four traveling waves driven by one phase
// phi: a body undulation wave, a leg protraction/retraction wave, a binary
// stepping/contact wave (duty-factor thresholded), and a uniform turning
// offset w3 on every body joint. Ground reaction is the same quasi-static
// Coulomb balance as the limbless chain, with stance feet carrying the leg
// friction weight and body segments a much smaller one.
//
// Coordination defaults: each leg pair shares one protraction actuator and
// one contact state (both feet swing and plant together), and the body
// undulation amplitude defaults to zero. With exactly left/right-antiphase
// legs the body mirror equals a half-period phase shift, which maps the
// sinusoidal turning path onto itself while negating rotation, so that
// coordination cannot turn at all; paired legs break the parity without
// introducing chirality, keeping the turn odd in the offset amplitude.

#ifndef OMEGATURN_CORE_MULTILEG_HPP_
#define OMEGATURN_CORE_MULTILEG_HPP_

#include <vector>

#include "core/chain.hpp"
#include "core/drag.hpp"
#include "core/geomech.hpp"
#include "core/trajectory.hpp"

namespace omegaturn {

struct MultilegGeometry {
  int segments = 5;               // body segments, one leg pair each
  double segment_length = 0.1;    // m
  double leg_offset = 0.05;       // m, hip lateral offset from the midline
  double leg_length = 0.04;       // m, hip-to-foot reach
  double body_amplitude = 0.0;    // body undulation wave (see note below)
  double leg_amplitude = deg2rad(30.0);   // protraction/retraction wave
  double duty_factor = 0.5;       // stance fraction per cycle
  double contact_phase = 0.0;     // rad, contact wave lead over protraction
  bool paired_contact = true;     // both feet of a pair share stance
  bool paired_protraction = true; // one protraction actuator per pair
  double mu_leg = 1.0;            // foot friction weight
  double mu_body = 0.1;           // body friction weight

  int body_joints() const { return segments - 1; }
  double body_length() const { return segments * segment_length; }
  ChainGeometry body_chain() const;
  void validate() const;
};

struct MultilegShape {
  double phi = 0.0;  // [0, 2*pi), shared wave phase
  double w3 = 0.0;   // rad, uniform turning offset on the body joints
};

struct LegState {
  bool stance = false;
  Eigen::Vector2d foot;  // body frame
  double protraction = 0.0;  // rad, positive swings the foot forward
};

struct MultilegConfiguration {
  JointVector body_joints;      // body_joints() angles
  std::vector<LegState> left;   // per segment
  std::vector<LegState> right;
};

MultilegConfiguration multileg_configuration(const MultilegShape& s,
                                             const MultilegGeometry& geom);

// Quasi-static balance with drag at stance feet (weight mu_leg each) and
// segment centers (weight mu_body each); the shape rate is (phi_dot,
// w3_dot) mapped through the configuration derivative.
BodyVelocity multileg_body_velocity(const MultilegShape& s,
                                    const Eigen::Vector2d& shape_rate,
                                    const MultilegGeometry& geom,
                                    double epsilon = 1e-6);

// Reduced 3x2 connection at a point of the (phi, w3) space.
Eigen::Matrix<double, 3, 2> multileg_connection(const MultilegShape& s,
                                                const MultilegGeometry& geom);

// Rotational-row height field over (phi periodic, w3 in [-w3_max, w3_max]).
HeightField multileg_height_function(const MultilegGeometry& geom,
                                     double w3_max, int cells);

// One cycle of phi(t) = 2*pi*w*t, w3(t) = A3 sin(2*pi*w*t), integrated in
// the world frame.
Trajectory multileg_turn_trajectory(double amp3, double omega,
                                    const MultilegGeometry& geom,
                                    int steps_per_cycle, int cycles);

double multileg_turn_deg(double amp3, double omega, const MultilegGeometry& geom,
                         int steps_per_cycle = 400, int cycles = 1);

}  // namespace omegaturn

#endif  // OMEGATURN_CORE_MULTILEG_HPP_
