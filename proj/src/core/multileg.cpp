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

#include "core/multileg.hpp"

#include <cmath>

#include "core/parallel.hpp"

namespace omegaturn {

ChainGeometry MultilegGeometry::body_chain() const {
  ChainGeometry chain;
  chain.num_joints = body_joints();
  chain.link_length = segment_length;
  chain.link_width = 2.0 * leg_offset;
  return chain;
}

void MultilegGeometry::validate() const {
  if (segments < 3) throw std::invalid_argument("segments must be >= 3");
  if (!(segment_length > 0.0) || !(leg_offset > 0.0) || !(leg_length > 0.0)) {
    throw std::invalid_argument("multileg dimensions must be > 0");
  }
  if (!(duty_factor > 0.0) || !(duty_factor < 1.0)) {
    throw std::invalid_argument("duty factor must be in (0, 1)");
  }
  if (!(mu_leg > mu_body) || mu_body < 0.0) {
    throw std::invalid_argument("mu_leg must exceed mu_body >= 0");
  }
}

namespace {

double segment_phase(int m, const MultilegGeometry& geom) {
  return kTwoPi * m / geom.segments;
}

// Stance when the contact wave (the protraction wave shifted a quarter
// cycle so stance coincides with retraction) exceeds the duty threshold:
// fraction of the cycle in stance equals the duty factor.
bool stance_at(double wave_phase, double duty) {
  return -std::cos(wave_phase) > std::cos(kPi * duty);
}

// Foot position in the segment frame. Left legs hang at +offset, right at
// -offset; protraction swings the foot toward the head.
Eigen::Vector2d foot_local(double beta, double offset, double reach, bool left) {
  const double side = left ? 1.0 : -1.0;
  return {reach * std::sin(beta), side * (offset + reach * std::cos(beta))};
}

Eigen::Vector2d foot_local_dbeta(double beta, double reach, bool left) {
  const double side = left ? 1.0 : -1.0;
  return {reach * std::cos(beta), -side * reach * std::sin(beta)};
}

}  // namespace

MultilegConfiguration multileg_configuration(const MultilegShape& s,
                                             const MultilegGeometry& geom) {
  geom.validate();
  const int joints = geom.body_joints();
  MultilegConfiguration cfg;
  cfg.body_joints.resize(joints);
  for (int j = 1; j <= joints; ++j) {
    cfg.body_joints[j - 1] =
        geom.body_amplitude * std::sin(s.phi + kTwoPi * j / geom.segments) + s.w3;
  }

  const ChainKinematics kin = chain_kinematics(cfg.body_joints, geom.body_chain());
  cfg.left.resize(geom.segments);
  cfg.right.resize(geom.segments);
  for (int m = 0; m < geom.segments; ++m) {
    const double phase = s.phi + segment_phase(m, geom);
    const double beta_l = geom.leg_amplitude * std::sin(phase);
    const double beta_r = geom.paired_protraction
                              ? beta_l
                              : geom.leg_amplitude * std::sin(phase + kPi);

    cfg.left[m].protraction = beta_l;
    cfg.left[m].stance = stance_at(phase + geom.contact_phase, geom.duty_factor);
    const Eigen::Vector2d local_l =
        foot_local(beta_l, geom.leg_offset, geom.leg_length, true);
    cfg.left[m].foot = link_point(kin, m, local_l.x(), local_l.y());

    cfg.right[m].protraction = beta_r;
    cfg.right[m].stance = stance_at(
        phase + geom.contact_phase + (geom.paired_contact ? 0.0 : kPi),
        geom.duty_factor);
    const Eigen::Vector2d local_r =
        foot_local(beta_r, geom.leg_offset, geom.leg_length, false);
    cfg.right[m].foot = link_point(kin, m, local_r.x(), local_r.y());
  }
  return cfg;
}

namespace {

// Drag problem for the multi-legged body: stance feet and segment centers,
// with the shape velocity induced by (phi_dot, w3_dot).
DragProblem multileg_drag_problem(const MultilegShape& s,
                                  const Eigen::Vector2d& shape_rate,
                                  const MultilegGeometry& geom, double epsilon) {
  const int joints = geom.body_joints();
  const ChainGeometry chain = geom.body_chain();

  JointVector theta(joints), dtheta_dphi(joints);
  for (int j = 1; j <= joints; ++j) {
    const double arg = s.phi + kTwoPi * j / geom.segments;
    theta[j - 1] = geom.body_amplitude * std::sin(arg) + s.w3;
    dtheta_dphi[j - 1] = geom.body_amplitude * std::cos(arg);
  }
  // d(theta)/dt: phi through the wave, w3 directly on every joint.
  const JointVector theta_rate =
      dtheta_dphi * shape_rate[0] + JointVector::Ones(joints) * shape_rate[1];

  const ChainKinematics kin = chain_kinematics(theta, chain);

  DragProblem prob;
  prob.epsilon = epsilon;

  double total_load = 0.0;
  // Segment centers.
  for (int m = 0; m < geom.segments; ++m) {
    prob.points.push_back(kin.links[m].center);
    prob.shape_vel.push_back(link_point_jacobian(kin, m, 0.0, 0.0) * theta_rate);
    prob.loads.push_back(geom.mu_body);
    total_load += geom.mu_body;
  }
  // Stance feet.
  for (int m = 0; m < geom.segments; ++m) {
    const double phase = s.phi + segment_phase(m, geom);
    for (const bool left : {true, false}) {
      const double contact_arg =
          phase + geom.contact_phase +
          ((left || geom.paired_contact) ? 0.0 : kPi);
      if (!stance_at(contact_arg, geom.duty_factor)) continue;
      const double swing_arg =
          (left || geom.paired_protraction) ? phase : phase + kPi;
      const double beta = geom.leg_amplitude * std::sin(swing_arg);
      const double dbeta_dphi = geom.leg_amplitude * std::cos(swing_arg);
      const Eigen::Vector2d local =
          foot_local(beta, geom.leg_offset, geom.leg_length, left);
      prob.points.push_back(link_point(kin, m, local.x(), local.y()));
      // Rotate the protraction swing into the body frame and add the
      // backbone contribution.
      const double h = kin.links[m].heading;
      const Eigen::Vector2d d = foot_local_dbeta(beta, geom.leg_length, left);
      const Eigen::Vector2d swing(std::cos(h) * d.x() - std::sin(h) * d.y(),
                                  std::sin(h) * d.x() + std::cos(h) * d.y());
      const Eigen::Vector2d vel =
          link_point_jacobian(kin, m, local.x(), local.y()) * theta_rate +
          swing * (dbeta_dphi * shape_rate[0]);
      prob.shape_vel.push_back(vel);
      prob.loads.push_back(geom.mu_leg);
      total_load += geom.mu_leg;
    }
  }

  prob.force_scale = total_load;
  prob.torque_scale = total_load * geom.body_length();
  return prob;
}

}  // namespace

BodyVelocity multileg_body_velocity(const MultilegShape& s,
                                    const Eigen::Vector2d& shape_rate,
                                    const MultilegGeometry& geom,
                                    double epsilon) {
  geom.validate();
  return solve_balance(multileg_drag_problem(s, shape_rate, geom, epsilon));
}

Eigen::Matrix<double, 3, 2> multileg_connection(const MultilegShape& s,
                                                const MultilegGeometry& geom) {
  Eigen::Matrix<double, 3, 2> conn;
  conn.col(0) = multileg_body_velocity(s, {1.0, 0.0}, geom);
  conn.col(1) = multileg_body_velocity(s, {0.0, 1.0}, geom);
  return conn;
}

HeightField multileg_height_function(const MultilegGeometry& geom,
                                     double w3_max, int cells) {
  geom.validate();
  ConnectionField field;
  field.grid.u = {"phi", 0.0, kTwoPi, cells, true};
  field.grid.v = {"w3", -w3_max, w3_max, cells, false};
  field.grid.validate();
  field.mask.assign(field.grid.num_nodes(), 1);
  field.cells.assign(field.grid.num_nodes(), Eigen::Matrix<double, 3, 2>::Zero());

  parallel_for(field.grid.v.cells, [&](int iv) {
    const double w3 = field.grid.v.coord(iv);
    for (int iu = 0; iu < field.grid.u.cells; ++iu) {
      const MultilegShape s{field.grid.u.coord(iu), w3};
      field.cells[field.grid.index(iu, iv)] = multileg_connection(s, geom);
    }
  });
  return height_function(field, BodyRow::kRotational);
}

Trajectory multileg_turn_trajectory(double amp3, double omega,
                                    const MultilegGeometry& geom,
                                    int steps_per_cycle, int cycles) {
  geom.validate();
  if (steps_per_cycle < 100) {
    throw std::invalid_argument("steps_per_cycle must be >= 100");
  }
  const double period = 1.0 / omega;
  const double dt = period / steps_per_cycle;
  const int total = steps_per_cycle * cycles;

  Trajectory traj;
  traj.period = period;
  traj.steps_per_cycle = steps_per_cycle;
  traj.cycles = cycles;
  traj.samples.reserve(total + 1);

  auto shape_at = [&](double t) {
    const double arg = kTwoPi * omega * t;
    return MultilegShape{wrap_to_2pi(arg), amp3 * std::sin(arg)};
  };
  auto rate_at = [&](double t) {
    const double arg = kTwoPi * omega * t;
    return Eigen::Vector2d(kTwoPi * omega, amp3 * kTwoPi * omega * std::cos(arg));
  };

  Se2 pose;
  traj.samples.push_back({0.0, pose, multileg_configuration(shape_at(0.0), geom).body_joints});
  for (int step = 0; step < total; ++step) {
    const double t_mid = (step + 0.5) * dt;
    try {
      const BodyVelocity xi =
          multileg_body_velocity(shape_at(t_mid), rate_at(t_mid), geom);
      pose = pose.compose(se2_exp({{xi[0], xi[1]}, xi[2]}, dt));
    } catch (const NonConvergenceError& e) {
      throw NonConvergenceError(
          "multileg step " + std::to_string(step) + ": " + e.what(), e.residual());
    }
    const double t_next = (step + 1) * dt;
    traj.samples.push_back(
        {t_next, pose, multileg_configuration(shape_at(t_next), geom).body_joints});
  }
  return traj;
}

double multileg_turn_deg(double amp3, double omega, const MultilegGeometry& geom,
                         int steps_per_cycle, int cycles) {
  return angular_displacement_deg(
      multileg_turn_trajectory(amp3, omega, geom, steps_per_cycle, cycles));
}

}  // namespace omegaturn
