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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oamqe/analysis.hpp"

namespace oamqe {

struct OffsetScan {
  double start = 0.0;
  double stop = 1.5;
  double step = 0.05;

  std::vector<double> values() const;
};

struct PaperTargets {
  double visibility = 0.8435;
  double visibility_tolerance = 0.017;
  double coincidence_probability = 1.25e-4;
};

/// Everything one CLI run needs. Nested YAML sections map one-to-one onto
/// the members below; see default_config_yaml() for the full key set.
struct ExperimentConfig {
  std::uint64_t seed = 20240917;
  std::string output_dir = "oamqe-out";
  int spp_order = 1;
  int truncation = kDefaultTruncation;
  GridParams grid;
  OffsetScan offsets;
  /// Unset means "use d*".
  std::optional<double> eraser_offset;
  double eraser_miscalibration = 0.0;
  Scenario scenario = Scenario::erased_ideal;
  int n_phase_points = 200;
  double phase_span = 4.0 * std::numbers::pi;
  double scan_frequency = 0.2;
  double crosstalk_epsilon = 0.0;
  CountingConfig detection;
  PaperTargets targets;

  /// Cross-field checks; throws ConfigError.
  void validate() const;
  SweepConfig sweep_config() const;
};

/// Strict parse: unknown keys, wrong types and out-of-range values raise
/// ConfigError carrying the 1-based line of the offending node.
ExperimentConfig parse_config(const std::string &yaml_text);
ExperimentConfig load_config(const std::string &path);

/// Full effective configuration as YAML; parse_config() round-trips it.
std::string default_config_yaml(const ExperimentConfig &cfg = {});

}  // namespace oamqe
