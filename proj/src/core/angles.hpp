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

#ifndef OMEGATURN_CORE_ANGLES_HPP_
#define OMEGATURN_CORE_ANGLES_HPP_

#include <cmath>
#include <numbers>

namespace omegaturn {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

// Reduce an angle to [0, 2*pi).
inline double wrap_to_2pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod can return exactly 2*pi after the correction when a is a tiny
  // negative number.
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

// Reduce an angle to (-pi, pi].
inline double wrap_to_pi(double a) {
  double r = wrap_to_2pi(a);
  if (r > kPi) r -= kTwoPi;
  return r;
}

}  // namespace omegaturn

#endif  // OMEGATURN_CORE_ANGLES_HPP_
