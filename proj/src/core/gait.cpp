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

#include "core/gait.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace omegaturn {

void SerpenoidParams::validate() const {
  if (!(temporal_freq > 0.0)) throw std::invalid_argument("omega must be > 0");
  if (spatial_freq < 0.0) throw std::invalid_argument("k must be >= 0");
  if (std::abs(amplitude) + std::abs(offset) > kPi) {
    throw std::invalid_argument("|A| + |kappa| must be <= pi");
  }
}

double AmplitudeProfile::value(double tau) const {
  return gain * (bias + std::sin(tau + phase));
}

double AmplitudeProfile::derivative(double tau) const {
  return gain * std::cos(tau + phase);
}

void TwoWaveDesign::validate() const {
  if (!(k_f > 0.0)) throw std::invalid_argument("k_f must be > 0");
  if (k_o < 0.0) throw std::invalid_argument("k_o must be >= 0");
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be > 0");
  if (forward_profile.gain < 0.0 || turning_profile.gain < 0.0) {
    throw std::invalid_argument("profile gains must be >= 0");
  }
  if (!(theta_max > 0.0) || theta_max > kPi) {
    throw std::invalid_argument("theta_max must be in (0, pi]");
  }
}

JointVector serpenoid_shape(double t, const SerpenoidParams& p,
                            int num_joints) {
  JointVector theta(num_joints);
  const double phase_t = kTwoPi * p.temporal_freq * t;
  for (int i = 1; i <= num_joints; ++i) {
    theta[i - 1] =
        p.amplitude * std::sin(phase_t + kTwoPi * p.spatial_freq * i / num_joints) +
        p.offset;
  }
  return theta;
}

std::pair<double, double> amplitude_profiles(double tau_f, double tau_o,
                                             const TwoWaveDesign& d) {
  return {d.forward_profile.value(tau_f), d.turning_profile.value(tau_o)};
}

JointVector two_wave_shape(double t, const TwoWaveDesign& d, int num_joints) {
  const double tau_f = kTwoPi * d.omega * t;
  const double tau_o = tau_f + d.psi;
  const auto [amp_f, amp_o] = amplitude_profiles(tau_f, tau_o, d);
  return two_wave_shape_amps(t, amp_f, amp_o, d, num_joints);
}

JointVector two_wave_rate(double t, const TwoWaveDesign& d, int num_joints) {
  const double tau_f = kTwoPi * d.omega * t;
  const double tau_o = tau_f + d.psi;
  const double dtau = kTwoPi * d.omega;  // d(tau)/dt for both phases
  const auto [amp_f, amp_o] = amplitude_profiles(tau_f, tau_o, d);
  const double damp_f = d.forward_profile.derivative(tau_f) * dtau;
  const double damp_o = d.turning_profile.derivative(tau_o) * dtau;
  return two_wave_rate_amps(t, amp_f, amp_o, damp_f, damp_o, d, num_joints);
}

JointVector two_wave_shape_amps(double t, double amp_f, double amp_o,
                                const TwoWaveDesign& d, int num_joints) {
  JointVector theta(num_joints);
  const double phase_t = kTwoPi * d.omega * t;
  for (int i = 1; i <= num_joints; ++i) {
    theta[i - 1] =
        amp_f * std::sin(phase_t + kTwoPi * d.k_f * i / num_joints) +
        amp_o * std::sin(phase_t + kTwoPi * d.k_o * i / num_joints + d.psi);
  }
  return theta;
}

JointVector two_wave_rate_amps(double t, double amp_f, double amp_o,
                               double damp_f, double damp_o,
                               const TwoWaveDesign& d, int num_joints) {
  JointVector rate(num_joints);
  const double phase_t = kTwoPi * d.omega * t;
  const double dphase = kTwoPi * d.omega;
  for (int i = 1; i <= num_joints; ++i) {
    const double arg_f = phase_t + kTwoPi * d.k_f * i / num_joints;
    const double arg_o = phase_t + kTwoPi * d.k_o * i / num_joints + d.psi;
    rate[i - 1] = damp_f * std::sin(arg_f) + amp_f * dphase * std::cos(arg_f) +
                  damp_o * std::sin(arg_o) + amp_o * dphase * std::cos(arg_o);
  }
  return rate;
}

JointVector geometric_basis_shape(const GeometricShapeCoords& r, double k,
                                  int num_joints) {
  JointVector theta(num_joints);
  for (int i = 1; i <= num_joints; ++i) {
    const double arg = kTwoPi * k * i / num_joints;
    theta[i - 1] = r.r1 * std::sin(arg) + r.r2 * std::cos(arg);
  }
  return theta;
}

JointVector reduced_shape(double amp_o, double tau_o, const TwoWaveDesign& d,
                          int num_joints) {
  const double tau_f = tau_o - d.psi;  // f3 inverse
  const double amp_f = d.forward_profile.value(tau_f);
  JointVector theta(num_joints);
  for (int i = 1; i <= num_joints; ++i) {
    theta[i - 1] =
        amp_f * std::sin(tau_f + kTwoPi * d.k_f * i / num_joints) +
        amp_o * std::sin(tau_o + kTwoPi * d.k_o * i / num_joints);
  }
  return theta;
}

TwoWaveDesign mirrored(const TwoWaveDesign& d) {
  TwoWaveDesign m = d;
  m.forward_profile.phase = wrap_to_pi(d.forward_profile.phase - kPi);
  m.turning_profile.phase = wrap_to_pi(d.turning_profile.phase - kPi);
  return m;
}

std::string design_to_json(const TwoWaveDesign& d) {
  nlohmann::json j;
  j["a_f"] = rad2deg(d.forward_profile.gain);
  j["gamma"] = d.forward_profile.bias;
  j["phi_f"] = rad2deg(d.forward_profile.phase);
  j["a_o"] = rad2deg(d.turning_profile.gain);
  j["phi_o"] = rad2deg(d.turning_profile.phase);
  j["k_f"] = d.k_f;
  j["k_o"] = d.k_o;
  j["psi"] = rad2deg(d.psi);
  j["omega"] = d.omega;
  j["theta_max"] = rad2deg(d.theta_max);
  return j.dump(2);
}

FeasibilityCertificate check_design_feasibility(const TwoWaveDesign& d,
                                                const ChainGeometry& geom,
                                                int phase_samples) {
  FeasibilityCertificate cert;
  const double period = d.period();
  for (int s = 0; s < phase_samples; ++s) {
    const double t = period * s / phase_samples;
    const JointVector theta = two_wave_shape(t, d, geom.num_joints);
    cert.max_abs_joint = std::max(cert.max_abs_joint, theta.cwiseAbs().maxCoeff());
    if (cert.max_abs_joint > d.theta_max) cert.within_limits = false;
    if (cert.collision_free && self_collides(theta, geom)) {
      cert.collision_free = false;
    }
  }
  return cert;
}

TwoWaveDesign design_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("gait json: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("gait json: expected an object");

  static const char* const kFields[] = {"a_f",   "gamma", "phi_f", "a_o",
                                        "phi_o", "k_f",   "k_o",   "psi",
                                        "omega", "theta_max"};
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* f : kFields) known |= (key == f);
    if (!known) throw std::invalid_argument("gait json: unknown key '" + key + "'");
    if (!value.is_number()) {
      throw std::invalid_argument("gait json: field '" + key + "' must be a number");
    }
  }
  for (const char* f : kFields) {
    if (!j.contains(f)) {
      throw std::invalid_argument(std::string("gait json: missing field '") + f + "'");
    }
  }

  TwoWaveDesign d;
  d.forward_profile = {deg2rad(j["a_f"].get<double>()), j["gamma"].get<double>(),
                       deg2rad(j["phi_f"].get<double>())};
  d.turning_profile = {deg2rad(j["a_o"].get<double>()), 1.0,
                       deg2rad(j["phi_o"].get<double>())};
  d.k_f = j["k_f"].get<double>();
  d.k_o = j["k_o"].get<double>();
  d.psi = deg2rad(j["psi"].get<double>());
  d.omega = j["omega"].get<double>();
  d.theta_max = deg2rad(j["theta_max"].get<double>());
  d.validate();
  return d;
}

}  // namespace omegaturn
