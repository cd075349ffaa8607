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

#pragma once

#include <stdexcept>
#include <string>

namespace islandrun {

// Input outside its documented domain (scores outside [0,1], mem_total <= 0, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An island declaration that cannot be admitted to the catalog.
class RegistrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Duplicate identifiers in the catalog or the mesh.
class ConflictError : public RegistrationError {
 public:
  using RegistrationError::RegistrationError;
};

// Reference to an island id the catalog or mesh does not know.
class UnknownIslandError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or unreadable configuration / data files. `line` is 1-based, 0 if
// unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Raised by the simulator when an IslandRun decision routes a request to an
// island with P_j < s_r. Never expected; it indicates a routing bug.
class PrivacyViolationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace islandrun
