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

// Closed-form gait templates for the planar chain.
//
// The joint wave family superposes a forward wave and a turning wave with
// independent spatial frequencies,
//
//   theta_i(t) = A_f(t) sin(2*pi*w*t + 2*pi*k_f*i/N)
//              + A_o(t) sin(2*pi*w*t + 2*pi*k_o*i/N + psi),   i = 1..N,
//
// with the amplitudes driven by prescribed profile functions of the wave
// phases tau_f = 2*pi*w*t and tau_o = 2*pi*w*t + psi:
//
//   A_f = a_f * (gamma + sin(tau_f + phi_f)),
//   A_o = a_o * (1     + sin(tau_o + phi_o)).
//
// k_o = 0 collapses to the classic offset turn (amplitude offset kappa(t)),
// and k_o = k_f collapses to sine/cosine mode mixing; both identities are
// exercised by tests at machine precision.

#ifndef OMEGATURN_CORE_GAIT_HPP_
#define OMEGATURN_CORE_GAIT_HPP_

#include <string>

#include "core/chain.hpp"

namespace omegaturn {

struct SerpenoidParams {
  double amplitude = 0.0;       // A, rad
  double temporal_freq = 0.1;   // omega, cycles/s
  double spatial_freq = 1.5;    // k, waves per body
  double offset = 0.0;          // kappa, rad

  void validate() const;  // omega > 0, k >= 0, |A| + |kappa| <= pi
};

// A(tau) = gain * (bias + sin(tau + phase))
struct AmplitudeProfile {
  double gain = 0.0;   // rad
  double bias = 1.0;   // dimensionless
  double phase = 0.0;  // rad

  double value(double tau) const;
  double derivative(double tau) const;  // dA/dtau
};

struct TwoWaveDesign {
  AmplitudeProfile forward_profile;              // f1 (a_f, gamma, phi_f)
  AmplitudeProfile turning_profile{0.0, 1.0, 0.0};  // f2, bias fixed at 1
  double k_f = 1.5;    // waves/body
  double k_o = 1.0;    // waves/body
  double psi = 0.0;    // rad, phase lag between waves
  double omega = 0.1;  // cycles/s
  double theta_max = deg2rad(90.0);  // rad, feasibility limit carried along

  double period() const { return 1.0 / omega; }
  void validate() const;  // k_f > 0, k_o >= 0, omega > 0, gains >= 0
};

struct SubShapeCoords {
  double tau_f = 0.0;  // [0, 2*pi)
  double tau_o = 0.0;  // [0, 2*pi)
  double amp_f = 0.0;  // rad
  double amp_o = 0.0;  // rad
};

struct GeometricShapeCoords {
  double r1 = 0.0;  // rad
  double r2 = 0.0;  // rad
};

JointVector serpenoid_shape(double t, const SerpenoidParams& p, int num_joints);

JointVector two_wave_shape(double t, const TwoWaveDesign& d, int num_joints);
JointVector two_wave_rate(double t, const TwoWaveDesign& d, int num_joints);

// (A_f, A_o) at the given wave phases.
std::pair<double, double> amplitude_profiles(double tau_f, double tau_o,
                                             const TwoWaveDesign& d);

JointVector geometric_basis_shape(const GeometricShapeCoords& r, double k,
                                  int num_joints);

// Shape on the (tau_o, A_o) sub-shape space with f1 and f3 fixed by the
// design (tau_f = tau_o - psi); equals two_wave_shape when A_o follows f2.
JointVector reduced_shape(double amp_o, double tau_o, const TwoWaveDesign& d,
                          int num_joints);

// Two-wave shape and rate with the amplitudes supplied directly instead of
// through the profiles; the admittance controller drives these.
JointVector two_wave_shape_amps(double t, double amp_f, double amp_o,
                                const TwoWaveDesign& d, int num_joints);
JointVector two_wave_rate_amps(double t, double amp_f, double amp_o,
                               double damp_f, double damp_o,
                               const TwoWaveDesign& d, int num_joints);

// The design whose trajectory is the body-x mirror of `d`'s: both profile
// phases shift by pi, which negates every joint angle up to a half-period
// time shift.
TwoWaveDesign mirrored(const TwoWaveDesign& d);

// JSON (de)serialization. Angles are degrees on the wire, radians in
// memory; field names: a_f, gamma, phi_f, a_o, phi_o, k_f, k_o, psi,
// omega, theta_max. Unknown keys are rejected.
std::string design_to_json(const TwoWaveDesign& d);
TwoWaveDesign design_from_json(const std::string& text);

// Joint-limit and self-collision screen over evenly sampled gait phases.
struct FeasibilityCertificate {
  double max_abs_joint = 0.0;  // rad, over all sampled phases
  bool collision_free = true;
  bool within_limits = true;
  bool ok() const { return collision_free && within_limits; }
};

FeasibilityCertificate check_design_feasibility(const TwoWaveDesign& d,
                                                const ChainGeometry& geom,
                                                int phase_samples = 200);

}  // namespace omegaturn

#endif  // OMEGATURN_CORE_GAIT_HPP_
