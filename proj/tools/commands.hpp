// Copyright 2026 The qcav Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qcav::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,        // I/O and other unexpected errors
  kExitArgumentError = 2,
  kExitNumerical = 3,      // truncation flag, step-size failure, unsolved steady state
};

/// Bad flag values or combinations; always raised before any computation starts.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "QCAV_OUTPUT_DIR";

/// Parses `args` (without the program name) and runs the selected subcommand.
int run(const std::vector<std::string>& args);

}  // namespace qcav::cli
