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

#include "core/chain.hpp"

#include <cmath>
#include <stdexcept>

namespace omegaturn {
namespace {

Eigen::Vector2d unit(double h) { return {std::cos(h), std::sin(h)}; }
Eigen::Vector2d unit_perp(double h) { return {-std::sin(h), std::cos(h)}; }

void check_shape(const JointVector& shape, const ChainGeometry& geom) {
  geom.validate();
  if (shape.size() != geom.num_joints) {
    throw std::invalid_argument("shape size does not match joint count");
  }
}

}  // namespace

void ChainGeometry::validate() const {
  if (num_joints < 2) throw std::invalid_argument("num_joints must be >= 2");
  if (!(link_length > 0.0)) throw std::invalid_argument("link_length must be > 0");
  if (!(link_width > 0.0)) throw std::invalid_argument("link_width must be > 0");
}

std::vector<LinkPose> forward_kinematics(const JointVector& shape,
                                         const ChainGeometry& geom) {
  check_shape(shape, geom);
  const int n = geom.num_joints;
  const int links = n + 1;
  const double l = geom.link_length;

  // Raw chain, tail anchored: heading of link j is the sum of joints ahead
  // of it (theta indices j..n-1 in storage order).
  std::vector<double> h(links, 0.0);
  for (int j = n - 1; j >= 0; --j) h[j] = h[j + 1] + shape[j];

  std::vector<Eigen::Vector2d> c(links, Eigen::Vector2d::Zero());
  for (int j = n - 1; j >= 0; --j) {
    c[j] = c[j + 1] + 0.5 * l * (unit(h[j + 1]) + unit(h[j]));
  }

  double mean_h = 0.0;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (int j = 0; j < links; ++j) {
    mean_h += h[j];
    centroid += c[j];
  }
  mean_h /= links;
  centroid /= links;

  const double cs = std::cos(-mean_h), sn = std::sin(-mean_h);
  std::vector<LinkPose> out(links);
  for (int j = 0; j < links; ++j) {
    const Eigen::Vector2d d = c[j] - centroid;
    out[j].center = {cs * d.x() - sn * d.y(), sn * d.x() + cs * d.y()};
    out[j].heading = h[j] - mean_h;
  }
  return out;
}

ChainKinematics chain_kinematics(const JointVector& shape,
                                 const ChainGeometry& geom) {
  check_shape(shape, geom);
  const int n = geom.num_joints;
  const int links = n + 1;
  const double l = geom.link_length;

  std::vector<double> h(links, 0.0);
  for (int j = n - 1; j >= 0; --j) h[j] = h[j + 1] + shape[j];

  std::vector<Eigen::Vector2d> c(links, Eigen::Vector2d::Zero());
  for (int j = n - 1; j >= 0; --j) {
    c[j] = c[j + 1] + 0.5 * l * (unit(h[j + 1]) + unit(h[j]));
  }

  // d h_j / d theta_k = [k >= j] in storage indexing.
  // d c_j / d theta_k via the chaining recursion.
  Eigen::MatrixXd dcx = Eigen::MatrixXd::Zero(links, n);
  Eigen::MatrixXd dcy = Eigen::MatrixXd::Zero(links, n);
  for (int j = n - 1; j >= 0; --j) {
    for (int k = 0; k < n; ++k) {
      Eigen::Vector2d d(dcx(j + 1, k), dcy(j + 1, k));
      if (k >= j + 1) d += 0.5 * l * unit_perp(h[j + 1]);
      if (k >= j) d += 0.5 * l * unit_perp(h[j]);
      dcx(j, k) = d.x();
      dcy(j, k) = d.y();
    }
  }

  double mean_h = 0.0;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (int j = 0; j < links; ++j) {
    mean_h += h[j];
    centroid += c[j];
  }
  mean_h /= links;
  centroid /= links;

  Eigen::VectorXd dmean(n);
  for (int k = 0; k < n; ++k) dmean[k] = double(k + 1) / links;
  Eigen::RowVectorXd dgx = dcx.colwise().mean();
  Eigen::RowVectorXd dgy = dcy.colwise().mean();

  const double cs = std::cos(-mean_h), sn = std::sin(-mean_h);

  ChainKinematics kin;
  kin.links.resize(links);
  kin.dcx.resize(links, n);
  kin.dcy.resize(links, n);
  kin.dh.resize(links, n);
  for (int j = 0; j < links; ++j) {
    const Eigen::Vector2d d = c[j] - centroid;
    const Eigen::Vector2d q{cs * d.x() - sn * d.y(), sn * d.x() + cs * d.y()};
    kin.links[j].center = q;
    kin.links[j].heading = h[j] - mean_h;
    for (int k = 0; k < n; ++k) {
      const Eigen::Vector2d dd(dcx(j, k) - dgx[k], dcy(j, k) - dgy[k]);
      // Rotate the raw derivative into the frame, then add the gauge term
      // from the frame itself rotating with the shape.
      Eigen::Vector2d dq{cs * dd.x() - sn * dd.y(), sn * dd.x() + cs * dd.y()};
      dq += dmean[k] * Eigen::Vector2d(q.y(), -q.x());  // -dmean * J * q
      kin.dcx(j, k) = dq.x();
      kin.dcy(j, k) = dq.y();
      kin.dh(j, k) = (k >= j ? 1.0 : 0.0) - dmean[k];
    }
  }
  return kin;
}

Eigen::Vector2d link_point(const ChainKinematics& kin, int link, double s,
                           double d) {
  const LinkPose& lp = kin.links[link];
  return lp.center + s * unit(lp.heading) + d * unit_perp(lp.heading);
}

Eigen::Matrix2Xd link_point_jacobian(const ChainKinematics& kin, int link,
                                     double s, double d) {
  const int n = int(kin.dh.cols());
  const LinkPose& lp = kin.links[link];
  const Eigen::Vector2d tangent = unit(lp.heading);
  const Eigen::Vector2d normal = unit_perp(lp.heading);
  Eigen::Matrix2Xd jac(2, n);
  for (int k = 0; k < n; ++k) {
    const Eigen::Vector2d dc(kin.dcx(link, k), kin.dcy(link, k));
    // d/dtheta_k [ c + s*u(h) + d*u_perp(h) ]
    jac.col(k) = dc + kin.dh(link, k) * (s * normal - d * tangent);
  }
  return jac;
}

namespace {

struct Obb {
  Eigen::Vector2d center;
  Eigen::Vector2d axis;  // unit direction along the length
  double half_len;
  double half_wid;
};

// Separating axis test for two oriented rectangles; touching rectangles
// do not count as overlapping.
bool obb_overlap(const Obb& a, const Obb& b) {
  const Eigen::Vector2d axes[4] = {
      a.axis, Eigen::Vector2d(-a.axis.y(), a.axis.x()),
      b.axis, Eigen::Vector2d(-b.axis.y(), b.axis.x())};
  const Eigen::Vector2d delta = b.center - a.center;
  for (const auto& ax : axes) {
    const double ra = a.half_len * std::abs(ax.dot(a.axis)) +
                      a.half_wid * std::abs(ax.dot(Eigen::Vector2d(-a.axis.y(), a.axis.x())));
    const double rb = b.half_len * std::abs(ax.dot(b.axis)) +
                      b.half_wid * std::abs(ax.dot(Eigen::Vector2d(-b.axis.y(), b.axis.x())));
    if (std::abs(ax.dot(delta)) >= ra + rb) return false;
  }
  return true;
}

}  // namespace

bool self_collides(const JointVector& shape, const ChainGeometry& geom,
                   double margin) {
  const auto poses = forward_kinematics(shape, geom);
  const int links = geom.num_links();
  const double hl = 0.5 * (geom.link_length + margin);
  const double hw = 0.5 * (geom.link_width + margin);

  std::vector<Obb> boxes(links);
  for (int j = 0; j < links; ++j) {
    boxes[j] = {poses[j].center,
                Eigen::Vector2d(std::cos(poses[j].heading), std::sin(poses[j].heading)),
                hl, hw};
  }
  for (int i = 0; i < links; ++i) {
    for (int j = i + 2; j < links; ++j) {
      if (obb_overlap(boxes[i], boxes[j])) return true;
    }
  }
  return false;
}

bool is_feasible(const JointVector& shape, const FeasibilitySpec& spec,
                 const ChainGeometry& geom) {
  for (int i = 0; i < shape.size(); ++i) {
    if (std::abs(shape[i]) > spec.theta_max) return false;
  }
  return !self_collides(shape, geom, spec.collision_margin);
}

}  // namespace omegaturn
