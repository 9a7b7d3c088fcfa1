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

#ifndef OMEGATURN_CORE_SE2_HPP_
#define OMEGATURN_CORE_SE2_HPP_

#include <Eigen/Dense>
#include <cmath>

namespace omegaturn {

// Planar rigid pose. heading is kept unwrapped so trajectories stay
// continuous across many turns.
struct Se2 {
  Eigen::Vector2d position{0.0, 0.0};
  double heading = 0.0;

  Eigen::Matrix2d rotation() const {
    const double c = std::cos(heading), s = std::sin(heading);
    Eigen::Matrix2d r;
    r << c, -s, s, c;
    return r;
  }

  Eigen::Vector2d apply(const Eigen::Vector2d& p) const {
    return position + rotation() * p;
  }

  Se2 compose(const Se2& rhs) const {
    return Se2{position + rotation() * rhs.position, heading + rhs.heading};
  }

  Se2 inverse() const {
    Se2 inv;
    inv.heading = -heading;
    inv.position = -(inv.rotation() * position);
    return inv;
  }
};

// Body-frame twist (xi_x, xi_y, xi_theta): forward, lateral, rotational.
struct Twist {
  Eigen::Vector2d linear{0.0, 0.0};
  double angular = 0.0;
};

// Exact SE(2) exponential of a twist applied for duration dt: translation
// follows the arc of a circle when the angular rate is nonzero.
inline Se2 se2_exp(const Twist& xi, double dt) {
  const double phi = xi.angular * dt;
  const Eigen::Vector2d v = xi.linear * dt;
  Se2 out;
  out.heading = phi;
  if (std::abs(phi) < 1e-9) {
    // Series expansion of V(phi) to keep the update smooth at phi = 0.
    const double a = 1.0 - phi * phi / 6.0;
    const double b = phi / 2.0 - phi * phi * phi / 24.0;
    out.position = Eigen::Vector2d(a * v.x() - b * v.y(), b * v.x() + a * v.y());
  } else {
    const double a = std::sin(phi) / phi;
    const double b = (1.0 - std::cos(phi)) / phi;
    out.position = Eigen::Vector2d(a * v.x() - b * v.y(), b * v.x() + a * v.y());
  }
  return out;
}

}  // namespace omegaturn

#endif  // OMEGATURN_CORE_SE2_HPP_
