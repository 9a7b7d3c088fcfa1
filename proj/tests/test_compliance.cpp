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
#include <random>

#include "core/compliance.hpp"

using namespace omegaturn;

namespace {

TwoWaveDesign compliant_design() {
  TwoWaveDesign d;
  // Profiles are unused by the compliant runs (amplitudes come from the
  // admittance state); the waves carry the structure.
  d.forward_profile = {deg2rad(45.0), 1.0, 0.0};
  d.turning_profile = {deg2rad(45.0), 1.0, 0.0};
  d.k_f = 1.5;
  d.k_o = 1.0;
  d.psi = kPi / 2;
  d.omega = 0.1;
  return d;
}

// Dense point-sampling overlap oracle for disc-vs-rectangle contact.
bool oracle_overlap(const Eigen::Vector2d& peg, double radius,
                    const LinkPose& link, double hl, double hw) {
  const Eigen::Vector2d ax(std::cos(link.heading), std::sin(link.heading));
  const Eigen::Vector2d ay(-ax.y(), ax.x());
  for (int i = 0; i <= 60; ++i) {
    for (int j = 0; j <= 40; ++j) {
      const Eigen::Vector2d p = link.center + (2.0 * i / 60 - 1.0) * hl * ax +
                                (2.0 * j / 40 - 1.0) * hw * ay;
      if ((p - peg).norm() < radius) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("hexagonal board generates disjoint pegs around a query point") {
  ChainGeometry geom;
  PegBoard board;
  board.spacing_bl = 0.3;
  board.validate(geom);
  const auto pegs = board.pegs_near({0.1, -0.2}, 0.6, geom);
  CHECK(pegs.size() > 3);
  const double pitch = board.pitch(geom);
  for (size_t i = 0; i < pegs.size(); ++i) {
    CHECK((pegs[i] - Eigen::Vector2d(0.1, -0.2)).norm() <= 0.6 + 1e-12);
    for (size_t j = i + 1; j < pegs.size(); ++j) {
      CHECK((pegs[i] - pegs[j]).norm() >= pitch - 1e-9);
    }
  }

  PegBoard tight;
  tight.spacing_bl = 0.02;  // 1.26 cm pitch < 3 cm peg diameter
  CHECK_THROWS_AS(tight.validate(geom), std::invalid_argument);
}

TEST_CASE("contacts: far body sees none, constructed overlap is detected") {
  ChainGeometry geom;
  PegBoard board;
  board.extent_radius = 0.0;  // empty board
  const JointVector straight = JointVector::Zero(8);
  CHECK(detect_contacts(Se2{}, straight, geom, board).empty());

  // A peg overlapping the head link's long edge by a known depth.
  PegBoard near_board;
  near_board.spacing_bl = 10.0;  // isolate one peg
  near_board.extent_radius = 0.01;  // just the origin peg
  const auto links = forward_kinematics(straight, geom);
  const double want_depth = 0.004;
  near_board.origin =
      links[0].center +
      Eigen::Vector2d(0.0, 0.5 * geom.link_width + near_board.peg_radius - want_depth);
  const auto contacts = detect_contacts(Se2{}, straight, geom, near_board);
  REQUIRE(contacts.size() == 1);
  CHECK(contacts[0].link == 0);
  CHECK(contacts[0].depth == doctest::Approx(want_depth).epsilon(1e-9));
  // Push direction: from the peg toward the link (downward here).
  CHECK(contacts[0].normal.y() == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("contact presence agrees with a dense sampling oracle") {
  ChainGeometry geom;
  std::mt19937_64 rng(301);
  std::uniform_real_distribution<double> angle(-0.8, 0.8);
  std::uniform_real_distribution<double> offset(-0.3, 0.3);
  const double hl = 0.5 * geom.link_length, hw = 0.5 * geom.link_width;

  int found = 0;
  for (int trial = 0; trial < 60; ++trial) {
    JointVector shape(8);
    for (int i = 0; i < 8; ++i) shape[i] = angle(rng);
    PegBoard board;
    board.spacing_bl = 10.0;
    board.origin = {offset(rng), offset(rng)};
    board.extent_radius = 0.01;  // single peg at the origin
    const auto contacts = detect_contacts(Se2{}, shape, geom, board);

    const auto links = forward_kinematics(shape, geom);
    bool oracle = false;
    for (const auto& link : links) {
      oracle = oracle || oracle_overlap(board.origin, board.peg_radius, link, hl, hw);
    }
    CHECK(!contacts.empty() == oracle);
    found += oracle;
  }
  CHECK(found > 5);
  CHECK(found < 55);
}

TEST_CASE("external torques: empty set, linearity, virtual-work oracle") {
  ChainGeometry geom;
  const JointVector shape = JointVector::Zero(8);
  CHECK(external_torques({}, 50.0, shape, geom).norm() == 0.0);

  // One contact on the head link (link 0).
  Contact c;
  c.link = 0;
  const auto links = forward_kinematics(shape, geom);
  c.point = links[0].center + Eigen::Vector2d(0.02, 0.5 * geom.link_width);
  c.normal = Eigen::Vector2d(0.3, -1.0).normalized();
  c.depth = 0.005;

  const JointVector tau = external_torques({c}, 50.0, shape, geom);
  const JointVector tau2 = external_torques({c}, 100.0, shape, geom);
  CHECK((tau2 - 2.0 * tau).norm() < 1e-12);

  // Virtual work: tau_j = F . d(point)/d(theta_j), finite differenced. The
  // contact point rides with the link at fixed local coordinates.
  const Eigen::Vector2d force = 50.0 * c.depth * c.normal;
  const Eigen::Vector2d local(0.02, 0.5 * geom.link_width);
  const double h = 1e-6;
  for (int j = 0; j < 8; ++j) {
    JointVector hi = shape, lo = shape;
    hi[j] += h;
    lo[j] -= h;
    const auto khi = chain_kinematics(hi, geom);
    const auto klo = chain_kinematics(lo, geom);
    const Eigen::Vector2d dp =
        (link_point(khi, 0, local.x(), local.y()) -
         link_point(klo, 0, local.x(), local.y())) /
        (2 * h);
    CHECK(tau[j] == doctest::Approx(force.dot(dp)).epsilon(1e-5));
  }
}

TEST_CASE("admittance equilibrium holds exactly") {
  const TwoWaveDesign d = compliant_design();
  AdmittanceParams p;
  AdmittanceState s;
  s.amplitudes = p.nominal;
  const AdmittanceState next =
      admittance_step(s, JointVector::Zero(8), p, 1.3, d, 8, 0.01);
  CHECK(next.amplitudes == p.nominal);
  CHECK(next.rates.norm() == 0.0);
}

TEST_CASE("admittance converges to the shifted steady state without overshoot") {
  const TwoWaveDesign d = compliant_design();
  AdmittanceParams p;
  CHECK(p.damping_ratio()[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  // Constant torque at a frozen phase.
  const double t = 0.7;
  JointVector tau = JointVector::Zero(8);
  tau[2] = 0.04;
  tau[5] = -0.02;
  const Eigen::Matrix2Xd jac = amplitude_jacobian(t, d, 8);
  const Eigen::Vector2d want =
      p.nominal.array() + (jac * tau).array() / p.stiffness.array();

  AdmittanceState s;
  s.amplitudes = p.nominal;
  const double dt = 1e-3;
  Eigen::Vector2d prev = s.amplitudes;
  for (int step = 0; step < 40000; ++step) {
    s = admittance_step(s, tau, p, t, d, 8, dt);
    // Overdamped: each amplitude approaches its target monotonically.
    for (int c = 0; c < 2; ++c) {
      const double before = prev[c] - want[c];
      const double after = s.amplitudes[c] - want[c];
      CHECK(std::abs(after) <= std::abs(before) + 1e-12);
    }
    prev = s.amplitudes;
  }
  CHECK((s.amplitudes - want).norm() < 1e-3);
}

TEST_CASE("admittance matches a fine-step reference integration") {
  const TwoWaveDesign d = compliant_design();
  AdmittanceParams p;
  const double t = 0.4;
  JointVector tau = JointVector::Zero(8);
  tau[1] = 0.03;

  // Reference: the same ODE integrated with RK4 at a tiny step.
  const Eigen::Matrix2Xd jac = amplitude_jacobian(t, d, 8);
  const Eigen::Vector2d drive = jac * tau;
  auto ode = [&](const Eigen::Vector4d& y) {
    Eigen::Vector4d dy;
    dy.head<2>() = y.tail<2>();
    dy.tail<2>() = (drive.array() - p.damping.array() * y.tail<2>().array() -
                    p.stiffness.array() * (y.head<2>() - p.nominal).array()) /
                   p.mass.array();
    return dy;
  };
  Eigen::Vector4d y;
  y << p.nominal, 0.0, 0.0;
  const double horizon = 2.0, h_ref = 1e-5;
  for (int i = 0; i < int(horizon / h_ref); ++i) {
    const Eigen::Vector4d k1 = ode(y);
    const Eigen::Vector4d k2 = ode(y + 0.5 * h_ref * k1);
    const Eigen::Vector4d k3 = ode(y + 0.5 * h_ref * k2);
    const Eigen::Vector4d k4 = ode(y + h_ref * k3);
    y += h_ref / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }

  AdmittanceState s;
  s.amplitudes = p.nominal;
  const double dt = 1e-4;
  for (int i = 0; i < int(horizon / dt); ++i) {
    s = admittance_step(s, tau, p, t, d, 8, dt);
  }
  CHECK((s.amplitudes - y.head<2>()).norm() < 1e-4);
  CHECK((s.rates - y.tail<2>()).norm() < 1e-4);
}

TEST_CASE("impulse decays without oscillation and energy decreases") {
  const TwoWaveDesign d = compliant_design();
  AdmittanceParams p;
  AdmittanceState s;
  s.amplitudes = p.nominal + Eigen::Vector2d(0.15, -0.1);
  s.rates = {0.0, 0.0};

  auto energy = [&](const AdmittanceState& st) {
    const Eigen::Vector2d dev = st.amplitudes - p.nominal;
    return (st.rates.array().square() * p.mass.array()).sum() +
           (dev.array().square() * p.stiffness.array()).sum();
  };

  const double dt = 1e-3;
  double prev_energy = energy(s);
  for (int step = 0; step < 20000; ++step) {
    s = admittance_step(s, JointVector::Zero(8), p, 0.0, d, 8, dt);
    const double e = energy(s);
    CHECK(e <= prev_energy + 1e-6);
    prev_energy = e;
  }
  CHECK((s.amplitudes - p.nominal).norm() < 1e-4);
}

TEST_CASE("amplitudes stay clamped to the joint limit") {
  const TwoWaveDesign d = compliant_design();
  AdmittanceParams p;
  AdmittanceState s;
  s.amplitudes = p.nominal;
  JointVector huge = JointVector::Constant(8, 5.0);
  for (int step = 0; step < 2000; ++step) {
    s = admittance_step(s, huge, p, 0.01 * step, d, 8, 0.01);
    CHECK(s.amplitudes.maxCoeff() <= d.theta_max + 1e-12);
    CHECK(s.amplitudes.minCoeff() >= -1e-12);
  }
}

TEST_CASE("empty board reproduces the open-loop turn exactly") {
  ChainGeometry geom;
  FrictionModel model;
  // A pulsing-profile design that genuinely turns.
  TwoWaveDesign d;
  d.forward_profile = {deg2rad(42.6), 0.07, deg2rad(-41.6)};
  d.turning_profile = {deg2rad(41.3), 1.0, deg2rad(28.7)};
  d.k_f = 1.5;
  d.k_o = 1.0;
  d.psi = deg2rad(-164.2);
  d.omega = 0.1;

  AdmittanceParams p;
  PegBoard board;
  board.extent_radius = 0.0;  // empty

  CompliantRunConfig run;
  run.steps_per_cycle = 200;
  run.cycles = 1;
  const auto [traj, metrics] = simulate_compliant(d, board, p, geom, model, run);
  const Trajectory open = integrate_gait(d, geom, model, 200, 1);

  const double da = angular_displacement_deg(traj) - angular_displacement_deg(open);
  CHECK(std::abs(da) < 0.5);
  CHECK(std::abs(angular_displacement_deg(open)) > 30.0);  // it actually turns
  CHECK((traj.samples.back().pose.position - open.samples.back().pose.position)
            .norm() < 1e-9);
}
