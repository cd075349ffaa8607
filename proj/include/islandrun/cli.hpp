// Copyright 2026 The IslandRun Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. The tools/ binary is a thin wrapper so the same
// logic is testable in-process.

#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace islandrun::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationFailure = 1,
  kRuntimeError = 2,
  kPrivacyViolation = 3,
};

// args excludes the program name.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace islandrun::cli
