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

#include "core/compliance.hpp"

#include <cmath>

namespace omegaturn {

void PegBoard::validate(const ChainGeometry& geom) const {
  if (!(peg_radius > 0.0)) throw std::invalid_argument("peg_radius must be > 0");
  if (!(pitch(geom) > 2.0 * peg_radius)) {
    throw std::invalid_argument("peg spacing must exceed the peg diameter");
  }
}

std::vector<Eigen::Vector2d> PegBoard::pegs_near(const Eigen::Vector2d& center,
                                                 double radius,
                                                 const ChainGeometry& geom) const {
  if (empty()) return {};
  // Hexagonal basis: a1 = (s, 0), a2 = (s/2, s*sqrt(3)/2).
  const double s = pitch(geom);
  const Eigen::Vector2d a1(s, 0.0);
  const Eigen::Vector2d a2(0.5 * s, 0.5 * std::sqrt(3.0) * s);
  Eigen::Matrix2d basis;
  basis << a1.x(), a2.x(), a1.y(), a2.y();
  const Eigen::Vector2d frac = basis.inverse() * (center - origin);

  std::vector<Eigen::Vector2d> out;
  const int reach = int(std::ceil(radius / (0.5 * std::sqrt(3.0) * s))) + 1;
  const int i0 = int(std::floor(frac.x()));
  const int j0 = int(std::floor(frac.y()));
  for (int i = i0 - reach; i <= i0 + reach + 1; ++i) {
    for (int j = j0 - reach; j <= j0 + reach + 1; ++j) {
      const Eigen::Vector2d peg = origin + double(i) * a1 + double(j) * a2;
      if ((peg - center).norm() > radius) continue;
      if ((peg - origin).norm() > extent_radius) continue;
      out.push_back(peg);
    }
  }
  return out;
}

void AdmittanceParams::validate() const {
  if (!(mass.minCoeff() > 0.0) || !(damping.minCoeff() > 0.0) ||
      !(stiffness.minCoeff() > 0.0)) {
    throw std::invalid_argument("admittance matrices must be positive definite");
  }
  if (!(control_dt > 0.0)) throw std::invalid_argument("control_dt must be > 0");
}

Eigen::Vector2d AdmittanceParams::damping_ratio() const {
  return damping.array() / (2.0 * (stiffness.array() * mass.array()).sqrt());
}

namespace {

// Closest point on an oriented rectangle (center, axis, half sizes) to p.
Eigen::Vector2d closest_on_rectangle(const Eigen::Vector2d& p,
                                     const Eigen::Vector2d& center,
                                     double heading, double hl, double hw,
                                     bool* inside) {
  const Eigen::Vector2d ax(std::cos(heading), std::sin(heading));
  const Eigen::Vector2d ay(-ax.y(), ax.x());
  const Eigen::Vector2d d = p - center;
  const double lx = d.dot(ax);
  const double ly = d.dot(ay);
  const double cx = std::clamp(lx, -hl, hl);
  const double cy = std::clamp(ly, -hw, hw);
  *inside = (lx == cx && ly == cy);
  if (*inside) {
    // Push out through the nearest face.
    const double push_x = hl - std::abs(lx);
    const double push_y = hw - std::abs(ly);
    if (push_x < push_y) {
      return center + std::copysign(hl, lx) * ax + ly * ay;
    }
    return center + lx * ax + std::copysign(hw, ly) * ay;
  }
  return center + cx * ax + cy * ay;
}

}  // namespace

ContactSet detect_contacts(const Se2& pose, const JointVector& shape,
                           const ChainGeometry& geom, const PegBoard& board) {
  const auto links = forward_kinematics(shape, geom);
  const double hl = 0.5 * geom.link_length;
  const double hw = 0.5 * geom.link_width;
  const double link_reach = std::hypot(hl, hw);

  ContactSet contacts;
  const Se2 inv = pose.inverse();
  for (int j = 0; j < int(links.size()); ++j) {
    const Eigen::Vector2d world_center = pose.apply(links[j].center);
    const auto pegs =
        board.pegs_near(world_center, link_reach + board.peg_radius, geom);
    for (const Eigen::Vector2d& peg_world : pegs) {
      const Eigen::Vector2d peg = inv.apply(peg_world);  // body frame
      bool inside = false;
      const Eigen::Vector2d closest = closest_on_rectangle(
          peg, links[j].center, links[j].heading, hl, hw, &inside);
      const double dist = (closest - peg).norm();
      double depth;
      Eigen::Vector2d normal;
      if (inside) {
        // Peg center swallowed by the footprint: push the link so the peg
        // exits through the nearest face.
        depth = board.peg_radius + dist;
        normal = dist > 1e-12 ? Eigen::Vector2d((peg - closest) / dist)
                              : (links[j].center - peg).normalized();
      } else {
        depth = board.peg_radius - dist;
        if (depth <= 0.0) continue;
        normal = (closest - peg) / dist;
      }
      contacts.push_back({j, closest, normal, depth});
    }
  }
  return contacts;
}

JointVector external_torques(const ContactSet& contacts, double stiffness,
                             const JointVector& shape, const ChainGeometry& geom) {
  const int n = geom.num_joints;
  JointVector tau = JointVector::Zero(n);
  if (contacts.empty()) return tau;

  const ChainKinematics kin = chain_kinematics(shape, geom);
  for (const Contact& c : contacts) {
    const Eigen::Vector2d force = stiffness * c.depth * c.normal;
    // Local coordinates of the contact point in its link frame.
    const LinkPose& lp = kin.links[c.link];
    const Eigen::Vector2d ax(std::cos(lp.heading), std::sin(lp.heading));
    const Eigen::Vector2d d = c.point - lp.center;
    const double s = d.dot(ax);
    const double w = d.dot(Eigen::Vector2d(-ax.y(), ax.x()));
    const Eigen::Matrix2Xd jac = link_point_jacobian(kin, c.link, s, w);
    tau += jac.transpose() * force;
  }
  return tau;
}

Eigen::Matrix2Xd amplitude_jacobian(double t, const TwoWaveDesign& d,
                                    int num_joints) {
  Eigen::Matrix2Xd jac(2, num_joints);
  const double phase_t = kTwoPi * d.omega * t;
  for (int i = 1; i <= num_joints; ++i) {
    jac(0, i - 1) = std::sin(phase_t + kTwoPi * d.k_f * i / num_joints);
    jac(1, i - 1) = std::sin(phase_t + kTwoPi * d.k_o * i / num_joints + d.psi);
  }
  return jac;
}

AdmittanceState admittance_step(const AdmittanceState& state,
                                const JointVector& tau_ext,
                                const AdmittanceParams& params, double t,
                                const TwoWaveDesign& d, int num_joints,
                                double dt) {
  const Eigen::Matrix2Xd jac = amplitude_jacobian(t, d, num_joints);
  const Eigen::Vector2d drive = jac * tau_ext;
  const Eigen::Vector2d accel =
      (drive.array() - params.damping.array() * state.rates.array() -
       params.stiffness.array() * (state.amplitudes - params.nominal).array()) /
      params.mass.array();

  AdmittanceState next;
  next.rates = state.rates + dt * accel;
  next.amplitudes = state.amplitudes + dt * next.rates;
  for (int c = 0; c < 2; ++c) {
    if (next.amplitudes[c] < 0.0) {
      next.amplitudes[c] = 0.0;
      next.rates[c] = 0.0;
    } else if (next.amplitudes[c] > d.theta_max) {
      next.amplitudes[c] = d.theta_max;
      next.rates[c] = 0.0;
    }
  }
  return next;
}

std::pair<Trajectory, TurnMetrics> simulate_compliant(
    const TwoWaveDesign& design, const PegBoard& board,
    const AdmittanceParams& params, const ChainGeometry& geom,
    const FrictionModel& model, const CompliantRunConfig& run) {
  design.validate();
  params.validate();
  board.validate(geom);
  if (run.steps_per_cycle < 100) {
    throw std::invalid_argument("steps_per_cycle must be >= 100");
  }

  const int n = geom.num_joints;
  const double period = design.period();
  const double dt = period / run.steps_per_cycle;
  const int total = run.steps_per_cycle * run.cycles;

  // Profile-driven nominal amplitudes. A constant nominal cannot turn at
  // all (the rotation flux comes from the amplitude pulsing), so the
  // admittance runs in deviation coordinates around the gait's profiles:
  // with no contact torque the compliant gait is exactly the open-loop one.
  const auto nominal = [&](double t) {
    const double tau_f = kTwoPi * design.omega * t;
    const double tau_o = tau_f + design.psi;
    return Eigen::Vector2d(design.forward_profile.value(tau_f),
                           design.turning_profile.value(tau_o));
  };
  const auto nominal_rate = [&](double t) {
    const double tau_f = kTwoPi * design.omega * t;
    const double tau_o = tau_f + design.psi;
    const double dtau = kTwoPi * design.omega;
    return Eigen::Vector2d(design.forward_profile.derivative(tau_f) * dtau,
                           design.turning_profile.derivative(tau_o) * dtau);
  };

  // Deviation dynamics reuse the admittance step with a zero set point.
  AdmittanceParams deviation = params;
  deviation.nominal = {0.0, 0.0};

  // Amplitude = nominal + deviation. Profiles may legitimately pass through
  // negative values (a phase-flipped wave), so the clamp bounds the
  // magnitude; the rate freezes where the clamp binds.
  const auto blend = [&](double t, const AdmittanceState& dev) {
    Eigen::Vector2d amp = nominal(t) + dev.amplitudes;
    Eigen::Vector2d rate = nominal_rate(t) + dev.rates;
    for (int c = 0; c < 2; ++c) {
      if (std::abs(amp[c]) > design.theta_max) {
        amp[c] = std::copysign(design.theta_max, amp[c]);
        rate[c] = 0.0;
      }
    }
    return std::pair{amp, rate};
  };

  AdmittanceState dev;  // starts on the nominal gait

  Trajectory traj;
  traj.period = period;
  traj.steps_per_cycle = run.steps_per_cycle;
  traj.cycles = run.cycles;
  traj.samples.reserve(total + 1);

  Se2 pose;
  auto [amp0, rate0] = blend(0.0, dev);
  JointVector shape = two_wave_shape_amps(0.0, amp0[0], amp0[1], design, n);
  traj.samples.push_back({0.0, pose, shape});

  for (int step = 0; step < total; ++step) {
    const double t = step * dt;
    const double t_mid = t + 0.5 * dt;

    // Contacts at the current state drive both the admittance update and
    // the force balance over this step.
    const auto [amp_t, rate_t] = blend(t, dev);
    shape = two_wave_shape_amps(t, amp_t[0], amp_t[1], design, n);
    const ContactSet contacts = detect_contacts(pose, shape, geom, board);

    if (run.compliant) {
      JointVector tau = external_torques(contacts, run.contact_stiffness, shape, geom);
      for (int j = 0; j < n; ++j) {
        const double mag = std::max(0.0, std::abs(tau[j]) - params.torque_deadband);
        tau[j] = std::copysign(mag, tau[j]);
      }
      tau *= params.torque_scale;
      const int substeps = std::max(1, int(std::ceil(dt / params.control_dt)));
      const double sub_dt = dt / substeps;
      for (int sub = 0; sub < substeps; ++sub) {
        dev = admittance_step(dev, tau, deviation, t + sub * sub_dt, design, n,
                              sub_dt);
      }
    }

    // Midpoint shape with the deviation frozen over the step.
    AdmittanceState dev_mid = dev;
    if (run.compliant) {
      dev_mid.amplitudes += 0.5 * dt * dev.rates;
    }
    const auto [amps_mid, rates_mid] = blend(t_mid, dev_mid);
    const JointVector shape_mid =
        two_wave_shape_amps(t_mid, amps_mid[0], amps_mid[1], design, n);
    const JointVector rate_mid = two_wave_rate_amps(
        t_mid, amps_mid[0], amps_mid[1], rates_mid[0], rates_mid[1], design, n);

    // Contact terms for the balance, implicit in the step horizon.
    const ContactSet mid_contacts = detect_contacts(pose, shape_mid, geom, board);
    std::vector<ContactTerm> terms;
    terms.reserve(mid_contacts.size());
    const ChainKinematics kin = chain_kinematics(shape_mid, geom);
    for (const Contact& c : mid_contacts) {
      const LinkPose& lp = kin.links[c.link];
      const Eigen::Vector2d ax(std::cos(lp.heading), std::sin(lp.heading));
      const Eigen::Vector2d d = c.point - lp.center;
      const double s = d.dot(ax);
      const double w = d.dot(Eigen::Vector2d(-ax.y(), ax.x()));
      ContactTerm term;
      term.point = c.point;
      term.normal = c.normal;
      term.shape_vel = link_point_jacobian(kin, c.link, s, w) * rate_mid;
      term.depth0 = c.depth;
      term.stiffness = run.contact_stiffness;
      term.dt = dt;
      terms.push_back(term);
    }

    try {
      const DragProblem prob = make_drag_problem(shape_mid, rate_mid, model, geom);
      const BodyVelocity xi = solve_balance(prob, terms);
      pose = pose.compose(se2_exp({{xi[0], xi[1]}, xi[2]}, dt));
    } catch (const NonConvergenceError& e) {
      throw NonConvergenceError(
          "compliant step " + std::to_string(step) + ": " + e.what(), e.residual());
    }

    const double t_next = (step + 1) * dt;
    const auto [amp_next, rate_next] = blend(t_next, dev);
    shape = two_wave_shape_amps(t_next, amp_next[0], amp_next[1], design, n);
    traj.samples.push_back({t_next, pose, shape});
  }

  return {traj, turn_metrics(traj, geom)};
}

}  // namespace omegaturn
