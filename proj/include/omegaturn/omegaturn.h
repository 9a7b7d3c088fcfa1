/* Copyright 2026 The omegaturn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C API of the omegaturn gait design and simulation library.
 *
 * All entry points return an ot_status; OT_OK means success. On failure a
 * thread-local message is available from ot_last_error(). Objects are
 * opaque handles created and destroyed through this interface. Strings
 * returned through char** outputs are owned by the caller and released
 * with ot_string_free().
 *
 * Configuration documents are JSON (see the README for the schema); study
 * functions write CSV/JSON/SVG result files into an output directory and
 * are deterministic for a fixed configuration.
 */

#ifndef OMEGATURN_OMEGATURN_H_
#define OMEGATURN_OMEGATURN_H_

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ot_status {
  OT_OK = 0,
  OT_ERROR_INVALID_ARGUMENT = 1,
  OT_ERROR_CONFIG = 2,
  OT_ERROR_SIMULATION = 3,
  OT_ERROR_IO = 4
} ot_status;

/* Library version string, e.g. "0.1.0". */
const char* ot_version(void);

/* Stable name for a status code, e.g. "config_error". */
const char* ot_status_name(ot_status status);

/* Message from the most recent failing call on this thread ("" if none). */
const char* ot_last_error(void);

void ot_string_free(char* text);

/* ---- configuration ---------------------------------------------------- */

typedef struct ot_config ot_config;

ot_status ot_config_parse(const char* json_text, ot_config** out_config);
ot_status ot_config_load(const char* path, ot_config** out_config);

/* Dotted-path override, e.g. ("friction.mu", "0.5"). */
ot_status ot_config_override(ot_config* config, const char* dotted_key,
                             const char* value);

/* Canonical serialized form (defaults materialized, keys sorted). */
ot_status ot_config_canonical_json(const ot_config* config, char** out_text);

/* 16-hex-character hash of the canonical form. */
ot_status ot_config_hash(const ot_config* config, char** out_text);

void ot_config_free(ot_config* config);

/* ---- gait designs ------------------------------------------------------ */

typedef struct ot_gait ot_gait;

/* Parses the documented gait design schema (fields a_f, gamma, phi_f, a_o,
 * phi_o, k_f, k_o, psi, omega, theta_max; angles in degrees). */
ot_status ot_gait_parse(const char* design_json, ot_gait** out_gait);
ot_status ot_gait_to_json(const ot_gait* gait, char** out_text);

/* Joint angles (radians) of the gait at time t for a chain with
 * num_joints joints; out_angles must hold num_joints doubles. */
ot_status ot_gait_joint_angles(const ot_gait* gait, double t_seconds,
                               int num_joints, double* out_angles_rad);

void ot_gait_free(ot_gait* gait);

/* ---- simulation --------------------------------------------------------- */

typedef struct ot_metrics {
  double angular_displacement_deg; /* per gait cycle */
  double swept_area_bl2;           /* convex hull, body lengths squared */
  double translation_drift_bl;     /* per gait cycle */
  int feasible;                    /* 1 = within limits and collision free */
} ot_metrics;

/* Integrates the configured gait and fills the headline turning metrics. */
ot_status ot_simulate_metrics(const ot_config* config, ot_metrics* out_metrics);

/* ---- studies ------------------------------------------------------------ */
/* Each writes its result files into out_dir (created if needed). */

ot_status ot_run_simulate(const ot_config* config, const char* out_dir);
ot_status ot_run_sweep(const ot_config* config, const char* out_dir);
ot_status ot_run_height(const ot_config* config, const char* out_dir);
ot_status ot_run_optimize(const ot_config* config, const char* out_dir);
ot_status ot_run_compliant(const ot_config* config, const char* out_dir);
ot_status ot_run_multileg(const ot_config* config, const char* out_dir);
ot_status ot_run_report(const ot_config* config, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* OMEGATURN_OMEGATURN_H_ */
