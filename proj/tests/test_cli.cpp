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

// End-to-end checks of the installed CLI: exit codes, error JSON, file
// outputs, and determinism. The binary path comes from the build system.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#ifndef OMEGATURN_CLI_PATH
#error "OMEGATURN_CLI_PATH must be defined by the build"
#endif

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const fs::path& stderr_file = {}) {
  std::string cmd = std::string(OMEGATURN_CLI_PATH) + " " + args;
  if (!stderr_file.empty()) {
    cmd += " 2> " + stderr_file.string();
  } else {
    cmd += " 2> /dev/null";
  }
  cmd += " > /dev/null";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("simulate runs with defaults and writes outputs") {
  const fs::path out = fresh_dir("ot_cli_sim");
  CHECK(run_cli("simulate --set simulate.steps_per_cycle=120 --set simulate.cycles=1 --out " +
                out.string()) == 0);
  CHECK(fs::exists(out / "trajectory.csv"));
  CHECK(fs::exists(out / "metrics.json"));
}

TEST_CASE("config errors exit with code 2 and machine-readable JSON") {
  const fs::path out = fresh_dir("ot_cli_err");
  const fs::path err = fs::temp_directory_path() / "ot_cli_err.json";

  const fs::path cfg = fs::temp_directory_path() / "ot_bad.json";
  std::ofstream(cfg) << "{\"bogus\": 1}";
  CHECK(run_cli("simulate --config " + cfg.string() + " --out " + out.string(),
                err) == 2);
  const std::string msg = slurp(err);
  CHECK(msg.find("\"error\"") != std::string::npos);
  CHECK(msg.find("config_error") != std::string::npos);
  CHECK(msg.find("bogus") != std::string::npos);
}

TEST_CASE("missing config file exits with the io code") {
  CHECK(run_cli("simulate --config /nonexistent.json --out /tmp/ot_cli_x") == 4);
}

TEST_CASE("overrides reach the engine") {
  const fs::path out = fresh_dir("ot_cli_set");
  CHECK(run_cli("simulate --set simulate.steps_per_cycle=120 "
                "--set simulate.cycles=1 --set gait.a_o=0 --set gait.a_f=0 --out " +
                out.string()) == 0);
  // Zero-amplitude design: the pose never moves.
  const std::string metrics = slurp(out / "metrics.json");
  CHECK(metrics.find("\"angular_displacement_deg_per_cycle\": 0.0") !=
        std::string::npos);
}

TEST_CASE("reruns with the same config are byte-identical") {
  const fs::path a = fresh_dir("ot_cli_det_a");
  const fs::path b = fresh_dir("ot_cli_det_b");
  const std::string flags =
      "simulate --set simulate.steps_per_cycle=120 --set simulate.cycles=1 --out ";
  CHECK(run_cli(flags + a.string()) == 0);
  CHECK(run_cli(flags + b.string()) == 0);
  CHECK(slurp(a / "trajectory.csv") == slurp(b / "trajectory.csv"));
  CHECK(slurp(a / "metrics.json") == slurp(b / "metrics.json"));
  CHECK(slurp(a / "timelapse.svg") == slurp(b / "timelapse.svg"));
}
