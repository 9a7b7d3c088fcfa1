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

#include "core/gait.hpp"

using namespace omegaturn;

namespace {

TwoWaveDesign random_design(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(0.0, 0.6);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> bias(0.0, 2.0);
  TwoWaveDesign d;
  d.forward_profile = {amp(rng), bias(rng), angle(rng)};
  d.turning_profile = {amp(rng), 1.0, angle(rng)};
  d.k_f = 1.5;
  d.k_o = 1.0;
  d.psi = angle(rng);
  d.omega = 0.1;
  return d;
}

}  // namespace

TEST_CASE("serpenoid analytic values") {
  SerpenoidParams zero{0.0, 0.1, 1.5, 0.0};
  CHECK(serpenoid_shape(3.7, zero, 8).norm() == 0.0);

  SerpenoidParams p{deg2rad(45.0), 0.1, 1.5, 0.0};
  const JointVector theta = serpenoid_shape(0.0, p, 8);
  CHECK(theta[3] == doctest::Approx(-deg2rad(45.0)).epsilon(1e-13));  // joint 4

  SerpenoidParams arc{0.0, 0.1, 1.5, deg2rad(10.0)};
  const JointVector arc_shape = serpenoid_shape(1.0, arc, 8);
  for (int i = 0; i < 8; ++i) {
    CHECK(arc_shape[i] == doctest::Approx(deg2rad(10.0)).epsilon(1e-13));
  }
}

TEST_CASE("amplitude profiles analytic values") {
  TwoWaveDesign d;
  d.forward_profile = {0.0, 1.0, 0.0};
  d.turning_profile = {deg2rad(22.5), 1.0, 0.0};
  for (double tau = 0.0; tau < kTwoPi; tau += 0.37) {
    CHECK(amplitude_profiles(tau, 0.0, d).first == 0.0);
  }

  d.forward_profile = {0.7, 0.0, 0.0};
  CHECK(amplitude_profiles(kPi / 2, 0.0, d).first == doctest::Approx(0.7).epsilon(1e-13));

  // f2 touches zero once per cycle.
  CHECK(std::abs(amplitude_profiles(0.0, 3 * kPi / 2, d).second) < 1e-15);
}

TEST_CASE("two-wave gait with zero gains is the zero shape") {
  TwoWaveDesign d;
  d.forward_profile = {0.0, 1.0, 0.0};
  d.turning_profile = {0.0, 1.0, 0.0};
  CHECK(two_wave_shape(2.13, d, 8).norm() == 0.0);
}

TEST_CASE("offset turn is the k_o = 0 specialization") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> time(0.0, 30.0);
  for (int trial = 0; trial < 1000; ++trial) {
    TwoWaveDesign d = random_design(rng);
    d.k_o = 0.0;
    const double t = time(rng);
    const double tau_f = kTwoPi * d.omega * t;
    const double tau_o = tau_f + d.psi;
    const auto [amp_f, amp_o] = amplitude_profiles(tau_f, tau_o, d);

    // Instantaneous serpenoid with offset kappa(t) = A_o(t) sin(2pi w t + psi).
    SerpenoidParams s{amp_f, d.omega, d.k_f, amp_o * std::sin(tau_f + d.psi)};
    const JointVector want = serpenoid_shape(t, s, 8);
    const JointVector got = two_wave_shape(t, d, 8);
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("geometric turn is the k_o = k_f specialization") {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> time(0.0, 30.0);
  for (int trial = 0; trial < 1000; ++trial) {
    TwoWaveDesign d = random_design(rng);
    d.k_o = d.k_f;
    const double t = time(rng);
    const double phase = kTwoPi * d.omega * t;
    const auto [amp_f, amp_o] = amplitude_profiles(phase, phase + d.psi, d);

    GeometricShapeCoords r;
    r.r1 = amp_f * std::cos(phase) + amp_o * std::cos(phase + d.psi);
    r.r2 = amp_f * std::sin(phase) + amp_o * std::sin(phase + d.psi);
    const JointVector want = geometric_basis_shape(r, d.k_f, 8);
    const JointVector got = two_wave_shape(t, d, 8);
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("geometric basis reproduces the serpenoid on the circular path") {
  const double amp = deg2rad(30.0), omega = 0.1, k = 1.5;
  SerpenoidParams p{amp, omega, k, 0.0};
  for (double t : {0.25 / omega, 0.0, 1.3, 7.9}) {
    GeometricShapeCoords r{amp * std::cos(kTwoPi * omega * t),
                           amp * std::sin(kTwoPi * omega * t)};
    const JointVector want = serpenoid_shape(t, p, 8);
    const JointVector got = geometric_basis_shape(r, k, 8);
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("reduced shape agrees with the full two-wave template") {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> time(0.0, 30.0);
  for (int trial = 0; trial < 200; ++trial) {
    TwoWaveDesign d = random_design(rng);
    const double t = time(rng);
    const double tau_o = kTwoPi * d.omega * t + d.psi;
    const double amp_o = d.turning_profile.value(tau_o);
    const JointVector got = reduced_shape(amp_o, tau_o, d, 8);
    const JointVector want = two_wave_shape(t, d, 8);
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12);
  }

  // A_o = 0 leaves the pure forward wave evaluated at tau_f = tau_o - psi.
  TwoWaveDesign d = random_design(rng);
  const double tau_o = 1.1;
  const JointVector fwd = reduced_shape(0.0, tau_o, d, 8);
  const double tau_f = tau_o - d.psi;
  const double amp_f = d.forward_profile.value(tau_f);
  for (int i = 1; i <= 8; ++i) {
    CHECK(fwd[i - 1] ==
          doctest::Approx(amp_f * std::sin(tau_f + kTwoPi * d.k_f * i / 8)).epsilon(1e-12));
  }
}

TEST_CASE("two-wave gait is periodic in one cycle") {
  std::mt19937_64 rng(109);
  TwoWaveDesign d = random_design(rng);
  for (double t : {0.0, 0.31, 4.77, 9.99}) {
    const JointVector a = two_wave_shape(t, d, 8);
    const JointVector b = two_wave_shape(t + d.period(), d, 8);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("integer spatial frequency makes the wave periodic in the index") {
  TwoWaveDesign d;
  d.forward_profile = {0.4, 1.0, 0.2};
  d.turning_profile = {0.3, 1.0, 0.9};
  d.k_f = 1.0;  // integer
  d.k_o = 1.0;
  d.psi = 0.7;
  const int n = 8;
  const double t = 2.3;
  const auto [amp_f, amp_o] =
      amplitude_profiles(kTwoPi * d.omega * t, kTwoPi * d.omega * t + d.psi, d);
  const JointVector theta = two_wave_shape(t, d, n);
  for (int i = 1; i <= n; ++i) {
    const double phase_t = kTwoPi * d.omega * t;
    const double shifted =
        amp_f * std::sin(phase_t + kTwoPi * d.k_f * (i + n) / n) +
        amp_o * std::sin(phase_t + kTwoPi * d.k_o * (i + n) / n + d.psi);
    CHECK(theta[i - 1] == doctest::Approx(shifted).epsilon(1e-12));
  }
}

TEST_CASE("analytic joint rate matches finite differences") {
  std::mt19937_64 rng(113);
  TwoWaveDesign d = random_design(rng);
  const double h = 1e-6;
  for (double t : {0.2, 1.9, 6.4}) {
    const JointVector fd =
        (two_wave_shape(t + h, d, 8) - two_wave_shape(t - h, d, 8)) / (2 * h);
    const JointVector rate = two_wave_rate(t, d, 8);
    CHECK((rate - fd).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("mirrored design negates the shape up to a half-period shift") {
  std::mt19937_64 rng(127);
  for (int trial = 0; trial < 100; ++trial) {
    TwoWaveDesign d = random_design(rng);
    const TwoWaveDesign m = mirrored(d);
    const double t = 3.1 + trial * 0.05;
    const JointVector neg = (-two_wave_shape(t, d, 8)).eval();
    const JointVector shifted = two_wave_shape(t + 0.5 * d.period(), m, 8);
    CHECK((neg - shifted).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("design json round trip and strictness") {
  TwoWaveDesign d;
  d.forward_profile = {deg2rad(25.0), 1.1, deg2rad(12.0)};
  d.turning_profile = {deg2rad(22.5), 1.0, deg2rad(-40.0)};
  d.k_f = 1.5;
  d.k_o = 1.0;
  d.psi = deg2rad(90.0);
  d.omega = 0.1;
  d.theta_max = deg2rad(90.0);

  const std::string text = design_to_json(d);
  const TwoWaveDesign back = design_from_json(text);
  CHECK(back.forward_profile.gain == doctest::Approx(d.forward_profile.gain).epsilon(1e-13));
  CHECK(back.forward_profile.bias == doctest::Approx(d.forward_profile.bias).epsilon(1e-13));
  CHECK(back.turning_profile.phase ==
        doctest::Approx(d.turning_profile.phase).epsilon(1e-13));
  CHECK(back.psi == doctest::Approx(d.psi).epsilon(1e-13));
  CHECK(back.k_o == d.k_o);

  CHECK_THROWS_AS(design_from_json("{\"a_f\": 10}"), std::invalid_argument);
  CHECK_THROWS_AS(design_from_json(
                      "{\"a_f\":10,\"gamma\":1,\"phi_f\":0,\"a_o\":10,\"phi_o\":0,"
                      "\"k_f\":1.5,\"k_o\":1,\"psi\":90,\"omega\":0.1,"
                      "\"theta_max\":90,\"bogus\":3}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(design_from_json("not json"), std::invalid_argument);
}
