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

#include "core/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/parallel.hpp"

namespace omegaturn {

Trajectory integrate_gait_function(const GaitFunction& gait, double period,
                                   const ChainGeometry& geom,
                                   const FrictionModel& model,
                                   int steps_per_cycle, int cycles,
                                   const Se2& start) {
  if (steps_per_cycle < 100) {
    throw std::invalid_argument("steps_per_cycle must be >= 100");
  }
  if (cycles < 1) throw std::invalid_argument("cycles must be >= 1");

  const int n = geom.num_joints;
  const double dt = period / steps_per_cycle;
  const int total = steps_per_cycle * cycles;

  Trajectory traj;
  traj.period = period;
  traj.steps_per_cycle = steps_per_cycle;
  traj.cycles = cycles;
  traj.samples.reserve(total + 1);

  JointVector shape(n), rate(n);
  gait(0.0, shape, rate);
  traj.samples.push_back({0.0, start, shape});

  Se2 pose = start;
  for (int step = 0; step < total; ++step) {
    const double t_mid = (step + 0.5) * dt;
    try {
      gait(t_mid, shape, rate);
      const BodyVelocity xi =
          solve_balance(make_drag_problem(shape, rate, model, geom));
      pose = pose.compose(se2_exp({{xi[0], xi[1]}, xi[2]}, dt));
    } catch (const NonConvergenceError& e) {
      throw NonConvergenceError(
          "integration step " + std::to_string(step) + ": " + e.what(),
          e.residual());
    }
    const double t_next = (step + 1) * dt;
    gait(t_next, shape, rate);
    traj.samples.push_back({t_next, pose, shape});
  }
  return traj;
}

Trajectory integrate_gait(const TwoWaveDesign& design, const ChainGeometry& geom,
                          const FrictionModel& model, int steps_per_cycle,
                          int cycles, const Se2& start) {
  design.validate();
  const int n = geom.num_joints;
  GaitFunction gait = [&design, n](double t, JointVector& shape, JointVector& rate) {
    shape = two_wave_shape(t, design, n);
    rate = two_wave_rate(t, design, n);
  };
  return integrate_gait_function(gait, design.period(), geom, model,
                                 steps_per_cycle, cycles, start);
}

double angular_displacement_deg(const Trajectory& traj) {
  if (traj.samples.size() < 2 || traj.cycles < 1) return 0.0;
  const double total =
      traj.samples.back().pose.heading - traj.samples.front().pose.heading;
  return rad2deg(total / traj.cycles);
}

double convex_hull_area(std::vector<Eigen::Vector2d> points) {
  if (points.size() < 3) return 0.0;
  std::sort(points.begin(), points.end(),
            [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
              return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
            });
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a,
                  const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Eigen::Vector2d> hull(2 * points.size());
  size_t k = 0;
  for (const auto& p : points) {  // lower
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  const size_t lower = k + 1;
  for (auto it = points.rbegin() + 1; it != points.rend(); ++it) {  // upper
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0) --k;
    hull[k++] = *it;
  }
  hull.resize(k);
  double area = 0.0;
  for (size_t i = 0; i + 1 < hull.size(); ++i) {
    area += hull[i].x() * hull[i + 1].y() - hull[i + 1].x() * hull[i].y();
  }
  return 0.5 * std::abs(area);
}

namespace {

void append_link_corners(std::vector<Eigen::Vector2d>& out, const Se2& pose,
                         const JointVector& shape, const ChainGeometry& geom) {
  const auto links = forward_kinematics(shape, geom);
  const double hl = 0.5 * geom.link_length;
  const double hw = 0.5 * geom.link_width;
  for (const auto& link : links) {
    const Eigen::Vector2d ax(std::cos(link.heading), std::sin(link.heading));
    const Eigen::Vector2d ay(-ax.y(), ax.x());
    out.push_back(pose.apply(link.center + hl * ax + hw * ay));
    out.push_back(pose.apply(link.center + hl * ax - hw * ay));
    out.push_back(pose.apply(link.center - hl * ax + hw * ay));
    out.push_back(pose.apply(link.center - hl * ax - hw * ay));
  }
}

}  // namespace

double swept_area_bl2(const Trajectory& traj, const ChainGeometry& geom) {
  if (traj.samples.empty()) return 0.0;
  const double bl2 = geom.body_length() * geom.body_length();

  const int spc = traj.steps_per_cycle;
  const int cycles = std::max(traj.cycles, 1);
  double sum = 0.0;
  int counted = 0;
  for (int c = 0; c < cycles; ++c) {
    const size_t begin = size_t(c) * spc;
    const size_t end = std::min(traj.samples.size() - 1, size_t(c + 1) * spc);
    if (begin >= traj.samples.size() - 1 && c > 0) break;
    std::vector<Eigen::Vector2d> pts;
    pts.reserve((end - begin + 1) * size_t(geom.num_links()) * 4);
    for (size_t i = begin; i <= end && i < traj.samples.size(); ++i) {
      append_link_corners(pts, traj.samples[i].pose, traj.samples[i].shape, geom);
    }
    sum += convex_hull_area(std::move(pts)) / bl2;
    ++counted;
  }
  return counted ? sum / counted : 0.0;
}

double translation_drift_bl(const Trajectory& traj, const ChainGeometry& geom) {
  if (traj.samples.size() < 2 || traj.cycles < 1) return 0.0;
  const double dist =
      (traj.samples.back().pose.position - traj.samples.front().pose.position).norm();
  return dist / geom.body_length() / traj.cycles;
}

TurnMetrics turn_metrics(const Trajectory& traj, const ChainGeometry& geom) {
  TurnMetrics m;
  m.angular_displacement_deg = angular_displacement_deg(traj);
  m.swept_area_bl2 = swept_area_bl2(traj, geom);
  m.translation_drift_bl = translation_drift_bl(traj, geom);
  return m;
}

std::vector<SweepRow> sweep(const std::vector<TwoWaveDesign>& designs,
                            const ChainGeometry& geom, const FrictionModel& model,
                            int steps_per_cycle, int cycles) {
  std::vector<SweepRow> rows(designs.size());
  parallel_for(int(designs.size()), [&](int i) {
    SweepRow& row = rows[i];
    row.design = designs[i];
    try {
      row.certificate = check_design_feasibility(designs[i], geom);
      const Trajectory traj =
          integrate_gait(designs[i], geom, model, steps_per_cycle, cycles);
      row.metrics = turn_metrics(traj, geom);
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  });
  return rows;
}

}  // namespace omegaturn
