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

// Text renderings of library results. Every function is pure; the CLI only
// decides where the strings go.

#pragma once

#include <filesystem>
#include <string>

#include "oamqe/analysis.hpp"
#include "oamqe/field_oracle.hpp"

namespace oamqe {

/// One row per scanned offset: |M(i,j)| for i, j in {-1, 0, 1} and the
/// leakage of the Gaussian column.
std::string calibration_csv(const ShiftedSppCalibration &cal);
/// d* summary as a JSON document.
std::string calibration_json(const ShiftedSppCalibration &cal);

/// phase_rad,detector_id,bin_index,count,seed. Empty body without MC data.
std::string counts_csv(const SweepResult &result);
/// Per phase point: scan time, probabilities and noiseless counts.
std::string expected_csv(const SweepResult &result);

/// Whether the fitted fringe amplitude exceeds three standard errors.
bool significant_fringe(const CosineFit &fit);
std::string sweep_summary(const SweepResult &result, const SweepConfig &cfg);

/// Writes `content` to a sibling temp file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, const std::string &content);

}  // namespace oamqe
