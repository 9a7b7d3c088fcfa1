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

#ifndef OMEGATURN_CORE_ERRORS_HPP_
#define OMEGATURN_CORE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace omegaturn {

// Quasi-static balance solve exceeded its iteration cap; carries the last
// normalized wrench residual.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class InfeasiblePathError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class NoFeasibleStartError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace omegaturn

#endif  // OMEGATURN_CORE_ERRORS_HPP_
