// Copyright 2026 The oamqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace oamqe {

/// Violated mathematical precondition (out-of-window mode, null state,
/// mismatched dimensions, probability outside [0, 1]).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid user-facing configuration. `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string &message, int line = 0)
      : std::runtime_error(message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oamqe
