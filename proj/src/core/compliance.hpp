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

// Peg-board obstacle field and amplitude-space admittance control.
//
// The compliant turn assigns spring-mass-damper dynamics to the two wave
// amplitudes A = (A_f, A_o):
//
//   M A'' + B A' + K (A - A_0) = J tau_ext,
//
// where tau_ext collects contact torques mapped through the wave Jacobian
// J (rows sin(2*pi*w*t + 2*pi*k_f*i/N) and sin(2*pi*w*t + 2*pi*k_o*i/N +
// psi)). Contacts push the body in the force balance and reshape the
// amplitudes through the admittance law.

#ifndef OMEGATURN_CORE_COMPLIANCE_HPP_
#define OMEGATURN_CORE_COMPLIANCE_HPP_

#include <limits>
#include <optional>
#include <vector>

#include "core/chain.hpp"
#include "core/drag.hpp"
#include "core/gait.hpp"
#include "core/se2.hpp"
#include "core/trajectory.hpp"

namespace omegaturn {

// Hexagonal peg lattice; peg centers are generated on demand from the
// lattice basis, so lookups near a point are O(1). The board is clipped to
// extent_radius around the origin (zero extent = empty board).
struct PegBoard {
  double spacing_bl = 0.3;     // lattice pitch in body lengths
  double peg_radius = 0.015;   // m
  Eigen::Vector2d origin{0.0, 0.0};
  double extent_radius = std::numeric_limits<double>::infinity();  // m

  double pitch(const ChainGeometry& geom) const {
    return spacing_bl * geom.body_length();
  }
  bool empty() const { return extent_radius <= 0.0; }
  void validate(const ChainGeometry& geom) const;

  // Peg centers within `radius` of `center` (world frame).
  std::vector<Eigen::Vector2d> pegs_near(const Eigen::Vector2d& center,
                                         double radius,
                                         const ChainGeometry& geom) const;
};

struct AdmittanceParams {
  Eigen::Vector2d mass{1.0, 1.0};        // M diagonal
  Eigen::Vector2d damping{8.0, 8.0};     // B diagonal
  Eigen::Vector2d stiffness{8.0, 8.0};   // K diagonal
  Eigen::Vector2d nominal{deg2rad(45.0), deg2rad(45.0)};  // A_0
  double control_dt = 0.0125;  // s
  // Sensor calibration: the drag model normalizes total normal load to 1,
  // so contact torques arrive in weight-normalized units. This converts
  // them to the physical-robot scale the gain matrices were tuned for
  // (total weight in newtons).
  double torque_scale = 160.0;
  // Per-joint soft deadband on the sensed torques (weight-normalized
  // units, applied before torque_scale): grazing contacts below the
  // threshold do not drive the amplitude dynamics.
  double torque_deadband = 0.0;

  void validate() const;
  // B / (2 sqrt(K M)) per channel.
  Eigen::Vector2d damping_ratio() const;
};

struct AdmittanceState {
  Eigen::Vector2d amplitudes{0.0, 0.0};  // (A_f, A_o), rad
  Eigen::Vector2d rates{0.0, 0.0};       // rad/s
};

struct Contact {
  int link = 0;
  Eigen::Vector2d point;   // body frame
  Eigen::Vector2d normal;  // body frame, unit, push direction on the body
  double depth = 0.0;      // m
};

using ContactSet = std::vector<Contact>;

// Disc-vs-rectangle tests for every (peg, link) pair near the body.
ContactSet detect_contacts(const Se2& pose, const JointVector& shape,
                           const ChainGeometry& geom, const PegBoard& board);

// Joint torques from penalty contact forces via the contact-point Jacobian
// transpose; forces are stiffness * depth along the contact normal.
JointVector external_torques(const ContactSet& contacts, double stiffness,
                             const JointVector& shape, const ChainGeometry& geom);

// Wave-amplitude Jacobian of the two-wave template: rows evaluate the
// forward and turning wave bases at the current phase.
Eigen::Matrix2Xd amplitude_jacobian(double t, const TwoWaveDesign& d,
                                    int num_joints);

// Semi-implicit Euler step of the admittance dynamics; amplitudes clamp to
// [0, theta_max] with their rates zeroed on clamp.
AdmittanceState admittance_step(const AdmittanceState& state,
                                const JointVector& tau_ext,
                                const AdmittanceParams& params, double t,
                                const TwoWaveDesign& d, int num_joints,
                                double dt);

struct CompliantRunConfig {
  double contact_stiffness = 50.0;  // N/m
  int steps_per_cycle = 400;
  int cycles = 3;
  bool compliant = true;  // false = open loop at the nominal amplitudes
};

// Constant-amplitude two-wave turn through the peg board. The open-loop
// variant holds the nominal amplitudes; the compliant variant lets the
// admittance dynamics reshape them in response to contact torques. Contact
// forces always enter the quasi-static balance.
std::pair<Trajectory, TurnMetrics> simulate_compliant(
    const TwoWaveDesign& design, const PegBoard& board,
    const AdmittanceParams& params, const ChainGeometry& geom,
    const FrictionModel& model, const CompliantRunConfig& run);

}  // namespace omegaturn

#endif  // OMEGATURN_CORE_COMPLIANCE_HPP_
