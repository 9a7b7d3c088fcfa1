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

#include "omegaturn/omegaturn.h"

#include <cstring>
#include <string>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/studies.hpp"
#include "core/trajectory.hpp"

namespace {

thread_local std::string g_last_error;

template <class F>
ot_status guard(F&& fn) {
  g_last_error.clear();
  try {
    return fn();
  } catch (const omegaturn::ConfigError& e) {
    g_last_error = e.what();
    return OT_ERROR_CONFIG;
  } catch (const omegaturn::IoError& e) {
    g_last_error = e.what();
    return OT_ERROR_IO;
  } catch (const omegaturn::NonConvergenceError& e) {
    g_last_error = e.what();
    return OT_ERROR_SIMULATION;
  } catch (const omegaturn::NoFeasibleStartError& e) {
    g_last_error = e.what();
    return OT_ERROR_SIMULATION;
  } catch (const omegaturn::InfeasiblePathError& e) {
    g_last_error = e.what();
    return OT_ERROR_SIMULATION;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return OT_ERROR_INVALID_ARGUMENT;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return OT_ERROR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return OT_ERROR_SIMULATION;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ot_status require(bool ok, const char* message) {
  if (ok) return OT_OK;
  g_last_error = message;
  return OT_ERROR_INVALID_ARGUMENT;
}

}  // namespace

struct ot_config {
  omegaturn::RunConfig cfg;
};

struct ot_gait {
  omegaturn::TwoWaveDesign design;
};

extern "C" {

const char* ot_version(void) { return omegaturn::kToolVersion; }

const char* ot_status_name(ot_status status) {
  switch (status) {
    case OT_OK:
      return "ok";
    case OT_ERROR_INVALID_ARGUMENT:
      return "invalid_argument";
    case OT_ERROR_CONFIG:
      return "config_error";
    case OT_ERROR_SIMULATION:
      return "simulation_error";
    case OT_ERROR_IO:
      return "io_error";
  }
  return "unknown";
}

const char* ot_last_error(void) { return g_last_error.c_str(); }

void ot_string_free(char* text) { delete[] text; }

ot_status ot_config_parse(const char* json_text, ot_config** out_config) {
  if (ot_status s = require(json_text && out_config, "null argument"); s != OT_OK)
    return s;
  return guard([&] {
    auto* handle = new ot_config{omegaturn::RunConfig::parse(json_text)};
    *out_config = handle;
    return OT_OK;
  });
}

ot_status ot_config_load(const char* path, ot_config** out_config) {
  if (ot_status s = require(path && out_config, "null argument"); s != OT_OK)
    return s;
  return guard([&] {
    auto* handle = new ot_config{omegaturn::RunConfig::load(path)};
    *out_config = handle;
    return OT_OK;
  });
}

ot_status ot_config_override(ot_config* config, const char* dotted_key,
                             const char* value) {
  if (ot_status s = require(config && dotted_key && value, "null argument");
      s != OT_OK)
    return s;
  return guard([&] {
    const std::string updated = omegaturn::apply_override(
        config->cfg.canonical_json(), dotted_key, value);
    config->cfg = omegaturn::RunConfig::parse(updated);
    return OT_OK;
  });
}

ot_status ot_config_canonical_json(const ot_config* config, char** out_text) {
  if (ot_status s = require(config && out_text, "null argument"); s != OT_OK)
    return s;
  return guard([&] {
    *out_text = dup_string(config->cfg.canonical_json());
    return OT_OK;
  });
}

ot_status ot_config_hash(const ot_config* config, char** out_text) {
  if (ot_status s = require(config && out_text, "null argument"); s != OT_OK)
    return s;
  return guard([&] {
    *out_text = dup_string(config->cfg.hash());
    return OT_OK;
  });
}

void ot_config_free(ot_config* config) { delete config; }

ot_status ot_gait_parse(const char* design_json, ot_gait** out_gait) {
  if (ot_status s = require(design_json && out_gait, "null argument"); s != OT_OK)
    return s;
  return guard([&] {
    auto* handle = new ot_gait{omegaturn::design_from_json(design_json)};
    *out_gait = handle;
    return OT_OK;
  });
}

ot_status ot_gait_to_json(const ot_gait* gait, char** out_text) {
  if (ot_status s = require(gait && out_text, "null argument"); s != OT_OK)
    return s;
  return guard([&] {
    *out_text = dup_string(omegaturn::design_to_json(gait->design));
    return OT_OK;
  });
}

ot_status ot_gait_joint_angles(const ot_gait* gait, double t_seconds,
                               int num_joints, double* out_angles_rad) {
  if (ot_status s = require(gait && out_angles_rad && num_joints >= 2,
                            "null argument or num_joints < 2");
      s != OT_OK)
    return s;
  return guard([&] {
    const omegaturn::JointVector theta =
        omegaturn::two_wave_shape(t_seconds, gait->design, num_joints);
    for (int i = 0; i < num_joints; ++i) out_angles_rad[i] = theta[i];
    return OT_OK;
  });
}

void ot_gait_free(ot_gait* gait) { delete gait; }

ot_status ot_simulate_metrics(const ot_config* config, ot_metrics* out_metrics) {
  if (ot_status s = require(config && out_metrics, "null argument"); s != OT_OK)
    return s;
  return guard([&] {
    const omegaturn::RunConfig& cfg = config->cfg;
    const omegaturn::Trajectory traj = omegaturn::integrate_gait(
        cfg.gait, cfg.geometry, cfg.friction, cfg.simulate.steps_per_cycle,
        cfg.simulate.cycles);
    const omegaturn::TurnMetrics m = omegaturn::turn_metrics(traj, cfg.geometry);
    const omegaturn::FeasibilityCertificate cert =
        omegaturn::check_design_feasibility(cfg.gait, cfg.geometry);
    out_metrics->angular_displacement_deg = m.angular_displacement_deg;
    out_metrics->swept_area_bl2 = m.swept_area_bl2;
    out_metrics->translation_drift_bl = m.translation_drift_bl;
    out_metrics->feasible = cert.ok() ? 1 : 0;
    return OT_OK;
  });
}

#define OT_DEFINE_RUN(name, fn)                                              \
  ot_status name(const ot_config* config, const char* out_dir) {             \
    if (ot_status s = require(config && out_dir, "null argument"); s != OT_OK) \
      return s;                                                              \
    return guard([&] {                                                       \
      omegaturn::fn(config->cfg, out_dir);                                   \
      return OT_OK;                                                          \
    });                                                                      \
  }

OT_DEFINE_RUN(ot_run_simulate, run_simulate)
OT_DEFINE_RUN(ot_run_sweep, run_sweep)
OT_DEFINE_RUN(ot_run_height, run_height)
OT_DEFINE_RUN(ot_run_optimize, run_optimize)
OT_DEFINE_RUN(ot_run_compliant, run_compliant)
OT_DEFINE_RUN(ot_run_multileg, run_multileg)
OT_DEFINE_RUN(ot_run_report, run_report)

#undef OT_DEFINE_RUN

}  // extern "C"
