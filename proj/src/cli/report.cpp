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

#include "oamqe/report.hpp"

#include <cmath>
#include <fstream>
#include <system_error>

#include <fmt/format.h>
#include <unistd.h>
#include <nlohmann/json.hpp>

#include "oamqe/errors.hpp"

namespace oamqe {

namespace {

constexpr int kSpan = 1;

double span_leakage_of(const ComplexMatrix &m, int truncation) {
  const int col = mode_index(0, truncation);
  double kept = 0.0;
  for (int l = -kSpan; l <= kSpan; ++l) kept += std::norm(m(mode_index(l, truncation), col));
  return 1.0 - kept;
}

void append_fit(std::string &s, const char *label, const CosineFit &f) {
  s += fmt::format("{}: A={:.6g} +- {:.2g}  phi0={:.6f} +- {:.2g} rad  C0={:.6g} +- {:.2g}  "
                   "V={:.6f} +- {:.2g}  residual_rms={:.3g}\n",
                   label, f.amplitude, f.amplitude_error, f.phase, f.phase_error, f.offset,
                   f.offset_error, f.offset > 0.0 ? visibility(f) : 0.0, f.visibility_error,
                   f.residual_rms);
}

}  // namespace

std::string calibration_csv(const ShiftedSppCalibration &cal) {
  const int L = cal.truncation;
  std::string s = "offset_w0";
  for (int i = -kSpan; i <= kSpan; ++i) {
    for (int j = -kSpan; j <= kSpan; ++j) s += fmt::format(",absM_{}_{}", i, j);
  }
  s += ",radial_leakage,out_of_window_leakage,span_leakage\n";
  const int col = mode_index(0, L);
  for (const auto &pt : cal.points) {
    s += fmt::format("{:.6f}", pt.offset);
    for (int i = -kSpan; i <= kSpan; ++i) {
      for (int j = -kSpan; j <= kSpan; ++j) {
        s += fmt::format(",{:.10f}", std::abs(pt.matrix(mode_index(i, L), mode_index(j, L))));
      }
    }
    s += fmt::format(",{:.10e},{:.10e},{:.10e}\n", pt.radial_leakage[col],
                     pt.out_of_window_leakage[col], span_leakage_of(pt.matrix, L));
  }
  return s;
}

std::string calibration_json(const ShiftedSppCalibration &cal) {
  nlohmann::ordered_json j;
  j["order"] = cal.order;
  j["truncation"] = cal.truncation;
  j["grid"] = {{"size", cal.grid.size}, {"extent", cal.grid.extent}, {"waist", cal.grid.waist}};
  j["scanned_offsets"] = cal.points.size();
  j["d_star_w0"] = cal.best_offset;
  j["balance_ratio"] = cal.balance_ratio;
  j["relative_phase_rad"] = cal.relative_phase;
  j["span_leakage"] = cal.span_leakage;
  j["radial_leakage"] = cal.radial_leakage;
  j["out_of_window_leakage"] = cal.out_of_window_leakage;
  j["balanced"] = cal.balanced;
  j["warning"] = cal.warning;
  auto rows = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < cal.best_matrix.rows(); ++r) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < cal.best_matrix.cols(); ++c) {
      row.push_back({cal.best_matrix(r, c).real(), cal.best_matrix(r, c).imag()});
    }
    rows.push_back(row);
  }
  j["matrix_at_d_star"] = rows;
  return j.dump(2) + "\n";
}

std::string counts_csv(const SweepResult &result) {
  std::string s = "phase_rad,detector_id,bin_index,count,seed\n";
  const std::pair<int, const DetectorTrace *> traces[] = {{3, &result.c3}, {4, &result.c4}};
  for (std::size_t k = 0; k < result.phases.size(); ++k) {
    for (const auto &[id, trace] : traces) {
      if (trace->bins.empty()) continue;
      const auto &bins = trace->bins[k];
      for (std::size_t b = 0; b < bins.size(); ++b) {
        s += fmt::format("{:.12f},{},{},{},{}\n", result.phases[k], id, b, bins[b], result.seed);
      }
    }
  }
  return s;
}

std::string expected_csv(const SweepResult &result) {
  std::string s = "phase_rad,scan_time_s,p_c3,p_c4,expected_c3,expected_c4\n";
  for (std::size_t k = 0; k < result.phases.size(); ++k) {
    s += fmt::format("{:.12f},{:.9f},{:.15e},{:.15e},{:.12e},{:.12e}\n", result.phases[k],
                     result.scan_times[k], result.c3.probability[k], result.c4.probability[k],
                     result.c3.expected[k], result.c4.expected[k]);
  }
  return s;
}

bool significant_fringe(const CosineFit &fit) {
  return std::abs(fit.amplitude) > 3.0 * fit.amplitude_error;
}

std::string sweep_summary(const SweepResult &result, const SweepConfig &cfg) {
  std::string s;
  s += fmt::format("scenario: {}\n", scenario_name(result.scenario));
  s += fmt::format("seed: {}\n", result.seed);
  s += fmt::format("phase_points: {}\n", result.phases.size());
  s += fmt::format("photon_rate_per_s: {}\n", cfg.detection.photon_rate);
  s += fmt::format("crosstalk_epsilon: {:.9g}\n", cfg.crosstalk_epsilon);
  const bool erased = result.scenario == Scenario::erased_ideal ||
                      result.scenario == Scenario::erased_calibrated;
  if (erased) s += fmt::format("eraser_offset_w0: {:.6f}\n", result.eraser_offset);

  s += "[analytic]\n";
  append_fit(s, "C3", result.c3.analytic_fit);
  append_fit(s, "C4", result.c4.analytic_fit);
  s += fmt::format("visibility_analytic: {:.6f}\n", result.visibility_analytic);
  s += fmt::format("fringe_phase_difference_rad: {:.6f}\n", result.fringe_phase_difference);

  if (result.c3.fit) {
    const CosineFit &fit = *result.c3.fit;
    s += "[monte_carlo]\n";
    append_fit(s, "C3", fit);
    append_fit(s, "C4", *result.c4.fit);
    s += fmt::format("visibility_fitted: {:.6f} +- {:.6f}\n", result.visibility_fitted,
                     result.visibility_fitted_error);
    s += fmt::format("visibility_raw_extrema: {:.6f}\n", result.c3.raw_visibility);
    s += fmt::format("flatness_metric: {:.6f}\n", result.flatness_metric);
    if (significant_fringe(fit)) {
      s += fmt::format("fringe: significant (|A| = {:.1f} sigma)\n",
                       std::abs(fit.amplitude) / fit.amplitude_error);
    } else {
      s += fmt::format("fringe: no significant fringe (|A| = {:.2f} sigma < 3)\n",
                       std::abs(fit.amplitude) / fit.amplitude_error);
    }
  } else {
    s += fmt::format("flatness_metric: {:.6e}\n", result.flatness_metric);
    s += result.c3.analytic_fit.amplitude > 1e-9 * result.c3.analytic_fit.offset
             ? "fringe: analytic fringe present\n"
             : "fringe: no significant fringe (analytic)\n";
  }
  return s;
}

void write_file_atomic(const std::filesystem::path &path, const std::string &content) {
  auto tmp = path;
  tmp += fmt::format(".tmp.{}", ::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", tmp.string()));
    out << content;
    out.flush();
    if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error(fmt::format("rename to '{}' failed: {}", path.string(), ec.message()));
  }
}

}  // namespace oamqe
