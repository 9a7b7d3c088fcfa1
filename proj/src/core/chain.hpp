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

// Planar kinematic chain of N+1 rectangular links joined by N yaw hinges.
//
// Body-frame convention: the frame origin is the mean of the N+1 link
// centers and the frame x-axis is the arithmetic mean of the N+1 unwrapped
// link headings. All poses returned here are expressed in that frame, which
// makes them invariant to any rigid transform applied to the raw chain.
//
// Joint i (1-based, stored at index i-1) sits between links i-1 and i.
// Headings accumulate from the tail link (index N, zero reference before
// the body-frame gauge) toward the head link (index 0), so a bend at joint
// 1 reorients the head link alone.

#ifndef OMEGATURN_CORE_CHAIN_HPP_
#define OMEGATURN_CORE_CHAIN_HPP_

#include <Eigen/Dense>
#include <vector>

#include "core/angles.hpp"

namespace omegaturn {

using JointVector = Eigen::VectorXd;  // N joint angles, radians

struct ChainGeometry {
  int num_joints = 8;          // N, active yaw joints
  double link_length = 0.07;   // m
  double link_width = 0.05;    // m

  int num_links() const { return num_joints + 1; }
  double body_length() const { return (num_joints + 1) * link_length; }

  // Throws std::invalid_argument on N < 2 or non-positive dimensions.
  void validate() const;
};

struct LinkPose {
  Eigen::Vector2d center{0.0, 0.0};  // body frame, m
  double heading = 0.0;              // body frame, rad
};

struct FeasibilitySpec {
  double theta_max = deg2rad(90.0);  // per-joint angle limit, rad
  double collision_margin = 0.0;     // rectangle inflation, m
};

// Link poses in the body frame. Total on any finite shape vector.
std::vector<LinkPose> forward_kinematics(const JointVector& shape,
                                         const ChainGeometry& geom);

// Link poses plus their exact derivatives with respect to every joint
// angle, gauge terms included. Row j of each matrix belongs to link j.
struct ChainKinematics {
  std::vector<LinkPose> links;  // N+1 poses
  Eigen::MatrixXd dcx;          // (N+1) x N, d(center.x)/d(theta_k)
  Eigen::MatrixXd dcy;          // (N+1) x N, d(center.y)/d(theta_k)
  Eigen::MatrixXd dh;           // (N+1) x N, d(heading)/d(theta_k)
};

ChainKinematics chain_kinematics(const JointVector& shape,
                                 const ChainGeometry& geom);

// Position and joint Jacobian of a point fixed in link frame `link` at local
// coordinates (s, d): s along the midline from the center, d lateral.
Eigen::Vector2d link_point(const ChainKinematics& kin, int link, double s,
                           double d);
Eigen::Matrix2Xd link_point_jacobian(const ChainKinematics& kin, int link,
                                     double s, double d);

// True iff any two links with index distance >= 2 overlap, with both
// rectangle footprints inflated by `margin` (half on each side). Exact
// separating-axis test on the oriented rectangles.
bool self_collides(const JointVector& shape, const ChainGeometry& geom,
                   double margin = 0.0);

// Joint limits and self-collision combined.
bool is_feasible(const JointVector& shape, const FeasibilitySpec& spec,
                 const ChainGeometry& geom);

}  // namespace omegaturn

#endif  // OMEGATURN_CORE_CHAIN_HPP_
