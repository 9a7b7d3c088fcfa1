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

// Quasi-static Coulomb ground reaction model.
//
// Each link sheds drag at sample points along its midline; the body velocity
// xi = (xi_x, xi_y, xi_theta) is the root of the net force/torque balance
//
//   sum_s  w_s * F(v_s(xi)) = 0,     F(v) = -mu * v / sqrt(|v|^2 + eps^2),
//
// where v_s is the sample's body-frame velocity: rigid part from xi plus the
// shape-rate part from the joint Jacobian. The regularization eps smooths
// the Coulomb law at v = 0; it sits far below gait speeds, so the solved
// velocity is independent of mu and positively homogeneous in the shape
// rate to the tolerances the tests pin down.

#ifndef OMEGATURN_CORE_DRAG_HPP_
#define OMEGATURN_CORE_DRAG_HPP_

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "core/chain.hpp"
#include "core/errors.hpp"

namespace omegaturn {

struct FrictionModel {
  double mu = 0.3;            // kinetic friction coefficient
  double epsilon = 1e-6;      // m/s, velocity regularization
  int samples_per_link = 3;   // drag sample points per link

  void validate() const;
};

// (xi_x, xi_y, xi_theta): forward, lateral, rotational body velocity.
using BodyVelocity = Eigen::Vector3d;

// Regularized Coulomb drag on a unit-load point.
Eigen::Vector2d point_drag(const Eigen::Vector2d& v, const FrictionModel& m);

// Fixed (shape, shape-rate) data for balance evaluations: body-frame sample
// positions, their shape-rate velocities, and per-sample normal loads
// (already scaled by the friction coefficient).
struct DragProblem {
  std::vector<Eigen::Vector2d> points;
  std::vector<Eigen::Vector2d> shape_vel;
  std::vector<double> loads;
  double epsilon = 1e-6;
  double force_scale = 1.0;   // total load, normalizes the force residual
  double torque_scale = 1.0;  // force_scale * body length

  Eigen::Vector3d wrench(const BodyVelocity& xi) const;
  // Wrench together with its exact derivative in xi.
  void wrench_and_jacobian(const BodyVelocity& xi, Eigen::Vector3d& w,
                           Eigen::Matrix3d& jac) const;
};

DragProblem make_drag_problem(const JointVector& shape,
                              const JointVector& shape_rate,
                              const FrictionModel& model,
                              const ChainGeometry& geom);

// Sample positions, loads, and per-point joint Jacobians for one shape, so
// several rates can be solved without redoing the kinematics.
struct DragSampler {
  std::vector<Eigen::Vector2d> points;
  std::vector<Eigen::Matrix2Xd> jacobians;
  std::vector<double> loads;
  double epsilon = 1e-6;
  double force_scale = 1.0;
  double torque_scale = 1.0;

  DragProblem problem(const JointVector& shape_rate) const;
};

DragSampler make_drag_sampler(const JointVector& shape,
                              const FrictionModel& model,
                              const ChainGeometry& geom);

// Net (F_x, F_y, T_z) about the body-frame origin.
Eigen::Vector3d net_wrench(const JointVector& shape,
                           const JointVector& shape_rate,
                           const BodyVelocity& xi, const FrictionModel& model,
                           const ChainGeometry& geom);

// A penalty contact force entering the balance. The penetration is taken
// implicitly at the end of the step (depth0 minus dt times the contact
// point's outward normal velocity), which keeps the root-finding problem
// solvable when a prescribed shape presses into an obstacle.
struct ContactTerm {
  Eigen::Vector2d point;    // body frame
  Eigen::Vector2d normal;   // unit, push direction on the body
  Eigen::Vector2d shape_vel;
  double depth0 = 0.0;      // m
  double stiffness = 50.0;  // N/m
  double dt = 0.0;          // s, implicit horizon (0 = explicit penalty)
};

Eigen::Vector3d contact_wrench(std::span<const ContactTerm> contacts,
                               const BodyVelocity& xi);
void contact_wrench_and_jacobian(std::span<const ContactTerm> contacts,
                                 const BodyVelocity& xi, Eigen::Vector3d& w,
                                 Eigen::Matrix3d& jac);

// Damped Newton on the 3-component wrench residual, initialized at xi = 0,
// using the exact residual Jacobian with Levenberg regularization when a
// plain step stalls. Converges to |residual| < 1e-9 in normalized units or
// throws NonConvergenceError after 100 iterations.
BodyVelocity solve_balance(const DragProblem& prob,
                           std::span<const ContactTerm> contacts = {});

BodyVelocity solve_body_velocity(const JointVector& shape,
                                 const JointVector& shape_rate,
                                 const FrictionModel& model,
                                 const ChainGeometry& geom);

// 3 x N map from joint rates to body velocity: column j is the solve at a
// unit rate on joint j.
Eigen::Matrix3Xd local_connection(const JointVector& shape,
                                  const FrictionModel& model,
                                  const ChainGeometry& geom);

inline constexpr double kWrenchTolerance = 1e-9;

}  // namespace omegaturn

#endif  // OMEGATURN_CORE_DRAG_HPP_
