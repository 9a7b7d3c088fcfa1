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

// Command-line front end. Parses arguments, then drives everything through
// the public C API of the shared library.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "omegaturn/omegaturn.h"

namespace {

int exit_code_for(ot_status status) {
  switch (status) {
    case OT_OK:
      return 0;
    case OT_ERROR_INVALID_ARGUMENT:
    case OT_ERROR_CONFIG:
      return 2;
    case OT_ERROR_SIMULATION:
      return 3;
    case OT_ERROR_IO:
      return 4;
  }
  return 1;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      default:
        out += c;
    }
  }
  return out;
}

int fail(ot_status status) {
  std::fprintf(stderr,
               "{\"error\": {\"code\": %d, \"kind\": \"%s\", \"message\": \"%s\"}}\n",
               int(status), ot_status_name(status), json_escape(ot_last_error()).c_str());
  return exit_code_for(status);
}

struct ConfigHandle {
  ot_config* ptr = nullptr;
  ~ConfigHandle() { ot_config_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gait design and quasi-static turning simulation for planar "
               "elongate robots"};
  app.set_version_flag("--version", ot_version());
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;

  using Runner = ot_status (*)(const ot_config*, const char*);
  struct Sub {
    const char* name;
    const char* help;
    Runner runner;
  };
  const std::vector<Sub> subs = {
      {"simulate", "Integrate one gait design and report turning metrics", ot_run_simulate},
      {"sweep", "Optimize and measure a family of designs over one parameter", ot_run_sweep},
      {"height", "Export height functions over the sub-shape spaces", ot_run_height},
      {"optimize", "Hierarchically optimize the configured gait family", ot_run_optimize},
      {"compliant", "Compliant vs open-loop turning in a peg board", ot_run_compliant},
      {"multileg", "Multi-legged turning study over (phi, w3)", ot_run_multileg},
      {"report", "Aggregate result CSVs in the output directory", ot_run_report},
  };

  Runner selected = nullptr;
  for (const Sub& sub : subs) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    cmd->add_option("--config", config_path, "JSON configuration file");
    cmd->add_option("--set", overrides,
                    "Override a config key, e.g. --set friction.mu=0.5");
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->callback([&selected, runner = sub.runner] { selected = runner; });
  }

  CLI11_PARSE(app, argc, argv);

  ConfigHandle config;
  ot_status status = config_path.empty()
                         ? ot_config_parse("{}", &config.ptr)
                         : ot_config_load(config_path.c_str(), &config.ptr);
  if (status != OT_OK) return fail(status);

  for (const std::string& kv : overrides) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr,
                   "{\"error\": {\"code\": 2, \"kind\": \"config_error\", "
                   "\"message\": \"--set expects key=value, got '%s'\"}}\n",
                   json_escape(kv).c_str());
      return 2;
    }
    status = ot_config_override(config.ptr, kv.substr(0, eq).c_str(),
                                kv.substr(eq + 1).c_str());
    if (status != OT_OK) return fail(status);
  }

  status = selected(config.ptr, out_dir.c_str());
  if (status != OT_OK) return fail(status);
  return 0;
}
