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

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "oamqe/detection.hpp"
#include "oamqe/field_oracle.hpp"
#include "oamqe/interferometer.hpp"

namespace oamqe {

enum class Scenario { which_path_l0, which_path_l1, erased_ideal, erased_calibrated };

std::string_view scenario_name(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view name);
std::span<const Scenario> all_scenarios();

struct SweepConfig {
  int n_phase_points = 200;
  /// Total phase excursion of one triangle period (up ramp plus down ramp).
  double phase_span = 4.0 * std::numbers::pi;
  /// Triangle-wave frequency; only used to timestamp scan points.
  double scan_frequency = 0.2;
  Scenario scenario = Scenario::erased_ideal;
  CountingConfig detection;
  /// Crosstalk applied to both detectors.
  double crosstalk_epsilon = 0.0;
  int arm_a2_spp_order = 1;
  int truncation = kDefaultTruncation;
  /// Eraser offset in w0. Unset: 0.5 for the ideal operator, d* for the
  /// calibrated one.
  std::optional<double> eraser_offset;
  /// Added to the calibrated eraser offset (misalignment knob).
  double eraser_miscalibration = 0.0;
  GridParams oracle_grid;
  bool monte_carlo = true;

  void validate() const;
};

/// A*cos(phi + phase) + offset, fitted as a*cos + b*sin + offset.
struct CosineFit {
  double amplitude = 0.0;
  double phase = 0.0;
  double offset = 0.0;
  double residual_rms = 0.0;
  double amplitude_error = 0.0;
  double phase_error = 0.0;
  double offset_error = 0.0;
  /// Standard error of the visibility |A|/C0.
  double visibility_error = 0.0;
};

/// Closed-form linear least squares. Needs >= 5 distinct phases spanning
/// more than pi; throws FitError otherwise or when the design is singular.
CosineFit fit_cosine(std::span<const double> phases, std::span<const double> counts);

/// |A| / C0. Throws DomainError for C0 <= 0.
double visibility(const CosineFit &fit);
/// (I_max - I_min) / (I_max + I_min).
double visibility_from_extrema(double i_max, double i_min);
/// Extrema variant evaluated on the fitted curve: C0 +- |A|.
double visibility_empirical(const CosineFit &fit);

/// Phase of each scan point for a triangle wave with `n` points per period.
std::vector<double> triangular_scan(int n, double span);

struct DetectorTrace {
  ProjectorSpec projector;
  std::vector<double> probability;
  /// Noiseless counts: probability * efficiency * rate * T * bins.
  std::vector<double> expected;
  /// Per phase point: counts per bin, and their sum.
  std::vector<std::vector<std::int64_t>> bins;
  std::vector<std::int64_t> counts;
  CosineFit analytic_fit;
  std::optional<CosineFit> fit;
  /// (max - min) / mean of the counts (or of the expected counts without MC).
  double flatness = 0.0;
  /// (max - min) / (max + min) of the raw per-phase counts.
  double raw_visibility = 0.0;
};

struct SweepResult {
  Scenario scenario = Scenario::erased_ideal;
  std::uint64_t seed = 0;
  double eraser_offset = 0.0;
  std::vector<double> phases;
  std::vector<double> scan_times;
  DetectorTrace c3;
  DetectorTrace c4;

  /// Headline figures, taken from C3.
  double visibility_analytic = 0.0;
  double visibility_fitted = 0.0;
  double visibility_fitted_error = 0.0;
  double visibility_empirical = 0.0;
  double flatness_metric = 0.0;
  /// Analytic C4 fit phase minus C3 fit phase, wrapped to (-pi, pi].
  double fringe_phase_difference = 0.0;
};

/// Everything a sweep needs that does not depend on phi: eraser operators and
/// detector projectors.
struct PreparedScenario {
  MziConfig mzi;
  EraserOps erasers;
  ProjectorSpec c3;
  ProjectorSpec c4;
  double eraser_offset = 0.0;
};

PreparedScenario prepare_scenario(const SweepConfig &cfg);
/// Analytic (C3, C4) detection probabilities at phase phi.
std::pair<double, double> detection_probabilities(const PreparedScenario &prepared, double phi);

SweepResult run_sweep(const SweepConfig &cfg);
SweepResult run_sweep(const SweepConfig &cfg, const PreparedScenario &prepared);

struct VisibilityCalibration {
  double epsilon = 0.0;
  double achieved = 0.0;
  int iterations = 0;
  double eraser_offset = 0.0;
};

/// Bisection over crosstalk eps in [0, 0.9] on the noiseless erased_calibrated
/// sweep until its fitted C3 visibility matches `target`. Throws
/// CalibrationError when the target lies outside the reachable range.
VisibilityCalibration calibrate_to_visibility(double target, double tol,
                                              const SweepConfig &base = {});

}  // namespace oamqe
