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

#include "core/drag.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace omegaturn {

void FrictionModel::validate() const {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (samples_per_link < 1) throw std::invalid_argument("samples_per_link must be >= 1");
}

Eigen::Vector2d point_drag(const Eigen::Vector2d& v, const FrictionModel& m) {
  const double speed = std::sqrt(v.squaredNorm() + m.epsilon * m.epsilon);
  return (-m.mu / speed) * v;
}

Eigen::Vector3d DragProblem::wrench(const BodyVelocity& xi) const {
  const double eps2 = epsilon * epsilon;
  double fx = 0.0, fy = 0.0, tz = 0.0;
  for (size_t s = 0; s < points.size(); ++s) {
    const Eigen::Vector2d& p = points[s];
    const double vx = xi[0] - xi[2] * p.y() + shape_vel[s].x();
    const double vy = xi[1] + xi[2] * p.x() + shape_vel[s].y();
    const double scale = -loads[s] / std::sqrt(vx * vx + vy * vy + eps2);
    const double fsx = scale * vx;
    const double fsy = scale * vy;
    fx += fsx;
    fy += fsy;
    tz += p.x() * fsy - p.y() * fsx;
  }
  return {fx, fy, tz};
}

void DragProblem::wrench_and_jacobian(const BodyVelocity& xi, Eigen::Vector3d& w,
                                      Eigen::Matrix3d& jac) const {
  const double eps2 = epsilon * epsilon;
  w.setZero();
  jac.setZero();
  for (size_t s = 0; s < points.size(); ++s) {
    const Eigen::Vector2d& p = points[s];
    const double vx = xi[0] - xi[2] * p.y() + shape_vel[s].x();
    const double vy = xi[1] + xi[2] * p.x() + shape_vel[s].y();
    const double rho2 = vx * vx + vy * vy + eps2;
    const double rho = std::sqrt(rho2);
    const double scale = -loads[s] / rho;
    const double fsx = scale * vx;
    const double fsy = scale * vy;
    w[0] += fsx;
    w[1] += fsy;
    w[2] += p.x() * fsy - p.y() * fsx;

    // df/dv = -load * (I - v v^T / rho^2) / rho; dv/dxi = [I, perp(p)].
    const double a = scale * (1.0 - vx * vx / rho2);  // dfx/dvx
    const double b = scale * (-vx * vy / rho2);       // dfx/dvy = dfy/dvx
    const double c = scale * (1.0 - vy * vy / rho2);  // dfy/dvy
    const double dvx_dth = -p.y();
    const double dvy_dth = p.x();
    const double dfx_dth = a * dvx_dth + b * dvy_dth;
    const double dfy_dth = b * dvx_dth + c * dvy_dth;
    jac(0, 0) += a;
    jac(0, 1) += b;
    jac(0, 2) += dfx_dth;
    jac(1, 0) += b;
    jac(1, 1) += c;
    jac(1, 2) += dfy_dth;
    jac(2, 0) += p.x() * b - p.y() * a;
    jac(2, 1) += p.x() * c - p.y() * b;
    jac(2, 2) += p.x() * dfy_dth - p.y() * dfx_dth;
  }
}

DragSampler make_drag_sampler(const JointVector& shape,
                              const FrictionModel& model,
                              const ChainGeometry& geom) {
  model.validate();
  const ChainKinematics kin = chain_kinematics(shape, geom);
  const int links = geom.num_links();
  const int spl = model.samples_per_link;

  DragSampler sampler;
  sampler.epsilon = model.epsilon;
  sampler.points.reserve(size_t(links) * spl);
  sampler.jacobians.reserve(size_t(links) * spl);
  sampler.loads.reserve(size_t(links) * spl);

  // Trapezoid sampling along each midline; total load normalized to 1 so mu
  // is the only friction scale.
  const double per_link = 1.0 / links;
  for (int j = 0; j < links; ++j) {
    for (int m = 0; m < spl; ++m) {
      double s, w;
      if (spl == 1) {
        s = 0.0;
        w = per_link;
      } else {
        s = -0.5 * geom.link_length + geom.link_length * m / (spl - 1);
        const bool end = (m == 0 || m == spl - 1);
        w = per_link * (end ? 0.5 : 1.0) / (spl - 1);
      }
      sampler.points.push_back(link_point(kin, j, s, 0.0));
      sampler.jacobians.push_back(link_point_jacobian(kin, j, s, 0.0));
      sampler.loads.push_back(w * model.mu);
    }
  }
  sampler.force_scale = model.mu;
  sampler.torque_scale = model.mu * geom.body_length();
  return sampler;
}

DragProblem DragSampler::problem(const JointVector& shape_rate) const {
  DragProblem prob;
  prob.points = points;
  prob.loads = loads;
  prob.epsilon = epsilon;
  prob.force_scale = force_scale;
  prob.torque_scale = torque_scale;
  prob.shape_vel.reserve(points.size());
  for (const auto& jac : jacobians) prob.shape_vel.push_back(jac * shape_rate);
  return prob;
}

DragProblem make_drag_problem(const JointVector& shape,
                              const JointVector& shape_rate,
                              const FrictionModel& model,
                              const ChainGeometry& geom) {
  return make_drag_sampler(shape, model, geom).problem(shape_rate);
}

Eigen::Vector3d net_wrench(const JointVector& shape,
                           const JointVector& shape_rate,
                           const BodyVelocity& xi, const FrictionModel& model,
                           const ChainGeometry& geom) {
  return make_drag_problem(shape, shape_rate, model, geom).wrench(xi);
}

namespace {
constexpr double kDepthSoft = 1e-4;  // m, smoothing of the max(depth, 0) kink
}

Eigen::Vector3d contact_wrench(std::span<const ContactTerm> contacts,
                               const BodyVelocity& xi) {
  Eigen::Vector3d w = Eigen::Vector3d::Zero();
  for (const ContactTerm& c : contacts) {
    const Eigen::Vector2d vel(xi[0] - xi[2] * c.point.y() + c.shape_vel.x(),
                              xi[1] + xi[2] * c.point.x() + c.shape_vel.y());
    const double depth = c.depth0 - c.dt * vel.dot(c.normal);
    const double depth_soft =
        0.5 * (depth + std::sqrt(depth * depth + kDepthSoft * kDepthSoft));
    const Eigen::Vector2d f = c.stiffness * depth_soft * c.normal;
    w[0] += f.x();
    w[1] += f.y();
    w[2] += c.point.x() * f.y() - c.point.y() * f.x();
  }
  return w;
}

void contact_wrench_and_jacobian(std::span<const ContactTerm> contacts,
                                 const BodyVelocity& xi, Eigen::Vector3d& w,
                                 Eigen::Matrix3d& jac) {
  w.setZero();
  jac.setZero();
  for (const ContactTerm& c : contacts) {
    const Eigen::Vector2d vel(xi[0] - xi[2] * c.point.y() + c.shape_vel.x(),
                              xi[1] + xi[2] * c.point.x() + c.shape_vel.y());
    const double depth = c.depth0 - c.dt * vel.dot(c.normal);
    const double root = std::sqrt(depth * depth + kDepthSoft * kDepthSoft);
    const double depth_soft = 0.5 * (depth + root);
    const double dsoft = 0.5 * (1.0 + depth / root);
    const Eigen::Vector2d f = c.stiffness * depth_soft * c.normal;
    w[0] += f.x();
    w[1] += f.y();
    w[2] += c.point.x() * f.y() - c.point.y() * f.x();

    // d(depth)/dxi = -dt * (n_x, n_y, perp(p).n)
    const Eigen::Vector3d ddepth =
        -c.dt * Eigen::Vector3d(c.normal.x(), c.normal.y(),
                                -c.point.y() * c.normal.x() +
                                    c.point.x() * c.normal.y());
    const Eigen::Vector3d coeff = c.stiffness * dsoft * ddepth;
    jac.row(0) += c.normal.x() * coeff.transpose();
    jac.row(1) += c.normal.y() * coeff.transpose();
    jac.row(2) += (c.point.x() * c.normal.y() - c.point.y() * c.normal.x()) *
                  coeff.transpose();
  }
}

namespace {

Eigen::Vector3d normalized(const Eigen::Vector3d& w, const DragProblem& p) {
  return {w[0] / p.force_scale, w[1] / p.force_scale, w[2] / p.torque_scale};
}

}  // namespace

namespace {

// Least-squares seed: the rigid motion minimizing the load-weighted sample
// speeds. Solving the quadratic fit is cheap and lands near the balance
// point when the drag field has a long curved valley.
BodyVelocity least_squares_seed(const DragProblem& prob) {
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d atb = Eigen::Vector3d::Zero();
  for (size_t s = 0; s < prob.points.size(); ++s) {
    const Eigen::Vector2d& p = prob.points[s];
    const double w = prob.loads[s];
    Eigen::Matrix<double, 2, 3> basis;
    basis << 1.0, 0.0, -p.y(), 0.0, 1.0, p.x();
    ata += w * basis.transpose() * basis;
    atb -= w * basis.transpose() * prob.shape_vel[s];
  }
  const Eigen::Vector3d seed = ata.ldlt().solve(atb);
  return seed.allFinite() ? seed : BodyVelocity::Zero();
}

}  // namespace

namespace {

// Damped Newton with Levenberg fallback from one start point; updates xi in
// place and returns the final normalized residual.
double newton_solve(const DragProblem& prob, std::span<const ContactTerm> contacts,
                    BodyVelocity& xi) {
  const auto residual = [&](const BodyVelocity& x) -> Eigen::Vector3d {
    Eigen::Vector3d w = prob.wrench(x);
    if (!contacts.empty()) w += contact_wrench(contacts, x);
    return normalized(w, prob);
  };
  const auto residual_and_jacobian = [&](const BodyVelocity& x, Eigen::Vector3d& r,
                                         Eigen::Matrix3d& j) {
    prob.wrench_and_jacobian(x, r, j);
    if (!contacts.empty()) {
      Eigen::Vector3d wc;
      Eigen::Matrix3d jc;
      contact_wrench_and_jacobian(contacts, x, wc, jc);
      r += wc;
      j += jc;
    }
    r = normalized(r, prob);
    j.row(0) /= prob.force_scale;
    j.row(1) /= prob.force_scale;
    j.row(2) /= prob.torque_scale;
  };

  Eigen::Vector3d r;
  Eigen::Matrix3d jac;
  residual_and_jacobian(xi, r, jac);
  double rn = r.norm();

  constexpr int kMaxIter = 100;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    if (rn < kWrenchTolerance) return rn;

    bool accepted = false;
    for (double damping : {0.0, 1e-8, 1e-4, 1e-2, 1.0, 1e2}) {
      Eigen::Matrix3d m = jac;
      if (damping > 0.0) {
        const double scale = jac.norm();
        m += damping * std::max(scale, 1e-12) * Eigen::Matrix3d::Identity();
      }
      const Eigen::Vector3d step = m.fullPivLu().solve(-r);
      if (!step.allFinite()) continue;
      double lambda = 1.0;
      while (lambda > 1e-14) {
        const BodyVelocity trial = xi + lambda * step;
        const Eigen::Vector3d rt = residual(trial);
        if (rt.norm() < rn) {
          xi = trial;
          rn = rt.norm();
          accepted = true;
          break;
        }
        lambda *= 0.5;
      }
      if (accepted) break;
    }
    if (!accepted) return rn;
    residual_and_jacobian(xi, r, jac);
    rn = r.norm();
  }
  return rn;
}

}  // namespace

BodyVelocity solve_balance(const DragProblem& prob,
                           std::span<const ContactTerm> contacts) {
  // Primary start at rest, then the least-squares seed family.
  BodyVelocity best_xi = BodyVelocity::Zero();
  double best_rn = std::numeric_limits<double>::infinity();
  const BodyVelocity seed = least_squares_seed(prob);
  const BodyVelocity starts[] = {BodyVelocity::Zero(), seed, 0.5 * seed,
                                 2.0 * seed};
  for (const BodyVelocity& start : starts) {
    BodyVelocity xi = start;
    const double rn = newton_solve(prob, contacts, xi);
    if (rn < best_rn) {
      best_rn = rn;
      best_xi = xi;
    }
    if (best_rn < kWrenchTolerance) return best_xi;
  }

  // Regularization homotopy: the smoothed problem converges easily, and
  // each stage warm-starts the next as eps walks halved steps back down.
  BodyVelocity xi = seed;
  for (double eps = 4e-3; eps > prob.epsilon; eps *= 0.5) {
    DragProblem relaxed = prob;
    relaxed.epsilon = eps;
    newton_solve(relaxed, contacts, xi);
  }
  double rn = newton_solve(prob, contacts, xi);
  if (rn < kWrenchTolerance) return xi;
  if (rn < best_rn) {
    best_rn = rn;
    best_xi = xi;
  }

  // Final polish: tiny deterministic nudges can free a line search pinned
  // on the regularization needle.
  const double nudge = 10.0 * prob.epsilon;
  for (int axis = 0; axis < 3 && best_rn >= kWrenchTolerance; ++axis) {
    for (double sign : {1.0, -1.0}) {
      BodyVelocity trial = best_xi;
      trial[axis] += sign * nudge;
      const double r = newton_solve(prob, contacts, trial);
      if (r < best_rn) {
        best_rn = r;
        best_xi = trial;
      }
      if (best_rn < kWrenchTolerance) return best_xi;
    }
  }
  if (best_rn < kWrenchTolerance) return best_xi;

  char msg[64];
  std::snprintf(msg, sizeof(msg), "%.3e", best_rn);
  throw NonConvergenceError(
      std::string("balance solve: iteration cap exceeded, residual ") + msg,
      best_rn);
}

BodyVelocity solve_body_velocity(const JointVector& shape,
                                 const JointVector& shape_rate,
                                 const FrictionModel& model,
                                 const ChainGeometry& geom) {
  if (!shape_rate.allFinite()) throw std::invalid_argument("shape rate must be finite");
  return solve_balance(make_drag_problem(shape, shape_rate, model, geom));
}

Eigen::Matrix3Xd local_connection(const JointVector& shape,
                                  const FrictionModel& model,
                                  const ChainGeometry& geom) {
  const int n = geom.num_joints;
  Eigen::Matrix3Xd conn(3, n);
  for (int j = 0; j < n; ++j) {
    JointVector rate = JointVector::Zero(n);
    rate[j] = 1.0;
    try {
      conn.col(j) = solve_body_velocity(shape, rate, model, geom);
    } catch (const NonConvergenceError& e) {
      throw NonConvergenceError(
          "local connection column " + std::to_string(j) + ": " + e.what(),
          e.residual());
    }
  }
  return conn;
}

}  // namespace omegaturn
