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

#include "oamqe/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "oamqe/errors.hpp"
#include "oamqe/parallel.hpp"

namespace oamqe {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::array<Scenario, 4> kScenarios = {Scenario::which_path_l0, Scenario::which_path_l1,
                                                Scenario::erased_ideal,
                                                Scenario::erased_calibrated};
constexpr double kEpsilonMax = 0.9;
constexpr double kIdealEraserOffset = 0.5;

double wrap_phase(double x) {
  x = std::remainder(x, 2.0 * kPi);
  return x <= -kPi ? x + 2.0 * kPi : x;
}

double flatness_of(std::span<const double> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  return mean > 0.0 ? (*hi - *lo) / mean : 0.0;
}

double raw_visibility_of(std::span<const double> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi + *lo > 0.0 ? visibility_from_extrema(*hi, *lo) : 0.0;
}

// Fitted C3 visibility of the noiseless sweep.
double analytic_visibility(const PreparedScenario &prepared, std::span<const double> phases) {
  std::vector<double> p3(phases.size());
  for (std::size_t k = 0; k < phases.size(); ++k) {
    p3[k] = detection_probabilities(prepared, phases[k]).first;
  }
  return visibility(fit_cosine(phases, p3));
}

}  // namespace

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::which_path_l0:
      return "which_path_l0";
    case Scenario::which_path_l1:
      return "which_path_l1";
    case Scenario::erased_ideal:
      return "erased_ideal";
    case Scenario::erased_calibrated:
      return "erased_calibrated";
  }
  return "unknown";
}

std::optional<Scenario> parse_scenario(std::string_view name) {
  for (Scenario s : kScenarios) {
    if (scenario_name(s) == name) {
      return s;
    }
  }
  return std::nullopt;
}

std::span<const Scenario> all_scenarios() { return kScenarios; }

void SweepConfig::validate() const {
  if (n_phase_points < 20) {
    throw ConfigError(fmt::format("n_phase_points must be >= 20, got {}", n_phase_points));
  }
  if (!(phase_span > 0.0) || !std::isfinite(phase_span)) {
    throw ConfigError("phase_span must be positive");
  }
  if (!(scan_frequency > 0.0)) {
    throw ConfigError("scan_frequency must be positive");
  }
  if (!(crosstalk_epsilon >= 0.0 && crosstalk_epsilon < 1.0)) {
    throw ConfigError(fmt::format("crosstalk_epsilon must lie in [0, 1), got {}",
                                  crosstalk_epsilon));
  }
  if (eraser_offset && !(*eraser_offset >= 0.0)) {
    throw ConfigError("eraser_offset must be >= 0");
  }
  if (arm_a2_spp_order == 0) {
    throw ConfigError("arm SPP order must be non-zero");
  }
  detection.validate();
  oracle_grid.validate();
}

CosineFit fit_cosine(std::span<const double> phases, std::span<const double> counts) {
  if (phases.size() != counts.size()) {
    throw FitError("phase and count vectors differ in length");
  }
  const std::set<double> distinct(phases.begin(), phases.end());
  if (distinct.size() < 5) {
    throw FitError(fmt::format("cosine fit needs >= 5 distinct phases, got {}", distinct.size()));
  }
  if (*distinct.rbegin() - *distinct.begin() <= kPi) {
    throw FitError("cosine fit needs phases spanning more than pi");
  }
  const auto n = static_cast<Eigen::Index>(phases.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = std::cos(phases[i]);
    design(i, 1) = std::sin(phases[i]);
    design(i, 2) = 1.0;
    y[i] = counts[i];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3) {
    throw FitError("cosine fit design matrix is rank deficient");
  }
  const Eigen::Vector3d beta = qr.solve(y);
  const double a = beta[0];
  const double b = beta[1];
  CosineFit fit;
  fit.amplitude = std::hypot(a, b);
  fit.phase = std::atan2(-b, a);
  fit.offset = beta[2];
  const double rss = (design * beta - y).squaredNorm();
  fit.residual_rms = std::sqrt(rss / n);

  const double dof = static_cast<double>(n - 3);
  const Eigen::Matrix3d cov = (rss / dof) * (design.transpose() * design).inverse();
  fit.offset_error = std::sqrt(cov(2, 2));
  Eigen::Vector3d grad_amp;
  if (fit.amplitude > 0.0) {
    grad_amp << a / fit.amplitude, b / fit.amplitude, 0.0;
    fit.amplitude_error = std::sqrt(grad_amp.dot(cov * grad_amp));
    Eigen::Vector3d grad_phase;
    const double a2 = fit.amplitude * fit.amplitude;
    grad_phase << b / a2, -a / a2, 0.0;
    fit.phase_error = std::sqrt(grad_phase.dot(cov * grad_phase));
  } else {
    fit.amplitude_error = std::sqrt(0.5 * (cov(0, 0) + cov(1, 1)));
    fit.phase_error = kPi;
  }
  if (fit.offset > 0.0) {
    const double c = fit.offset;
    Eigen::Vector3d grad_v;
    if (fit.amplitude > 0.0) {
      grad_v << a / (fit.amplitude * c), b / (fit.amplitude * c), -fit.amplitude / (c * c);
      fit.visibility_error = std::sqrt(grad_v.dot(cov * grad_v));
    } else {
      fit.visibility_error = fit.amplitude_error / c;
    }
  }
  return fit;
}

double visibility(const CosineFit &fit) {
  if (!(fit.offset > 0.0)) {
    throw DomainError(fmt::format("visibility needs a positive offset, got {}", fit.offset));
  }
  return std::abs(fit.amplitude) / fit.offset;
}

double visibility_from_extrema(double i_max, double i_min) {
  if (!(i_max + i_min > 0.0)) {
    throw DomainError("visibility needs I_max + I_min > 0");
  }
  return (i_max - i_min) / (i_max + i_min);
}

double visibility_empirical(const CosineFit &fit) {
  if (!(fit.offset > 0.0)) {
    throw DomainError(fmt::format("visibility needs a positive offset, got {}", fit.offset));
  }
  return visibility_from_extrema(fit.offset + std::abs(fit.amplitude),
                                 fit.offset - std::abs(fit.amplitude));
}

std::vector<double> triangular_scan(int n, double span) {
  if (n < 2) {
    throw DomainError("triangular scan needs at least two points");
  }
  std::vector<double> phases(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double s = static_cast<double>(k) / n;
    const double tri = s < 0.5 ? 2.0 * s : 2.0 * (1.0 - s);
    phases[k] = 0.5 * span * tri;
  }
  return phases;
}

PreparedScenario prepare_scenario(const SweepConfig &cfg) {
  cfg.validate();
  PreparedScenario prepared;
  MziConfig &mzi = prepared.mzi;
  mzi.arm_a2_spp_order = cfg.arm_a2_spp_order;
  mzi.truncation = cfg.truncation;
  mzi.oracle_grid = cfg.oracle_grid;
  mzi.validate();

  const int order = cfg.arm_a2_spp_order;
  prepared.c3.port = OutputPort::p3;
  prepared.c4.port = OutputPort::p4;
  switch (cfg.scenario) {
    case Scenario::which_path_l0:
      break;
    case Scenario::which_path_l1:
      // P3 carries |-order>, P4 carries |+order>.
      prepared.c3.target_mode = -order;
      prepared.c4.target_mode = order;
      break;
    case Scenario::erased_ideal:
    case Scenario::erased_calibrated: {
      const bool ideal = cfg.scenario == Scenario::erased_ideal;
      double offset = 0.0;
      if (ideal) {
        offset = cfg.eraser_offset.value_or(kIdealEraserOffset);
      } else {
        offset = cfg.eraser_offset ? *cfg.eraser_offset
                                   : find_balanced_offset(std::abs(order), cfg.oracle_grid);
        offset += cfg.eraser_miscalibration;
        if (offset < 0.0) {
          throw ConfigError(fmt::format("miscalibrated eraser offset {} is negative", offset));
        }
      }
      prepared.eraser_offset = offset;
      mzi.use_ideal_eraser = ideal;
      mzi.eraser_p3 = p3_eraser_spec(offset, order);
      mzi.eraser_p4 = p4_eraser_spec(offset, order);
      prepared.erasers = build_eraser_ops(mzi);
      break;
    }
  }
  prepared.c3.crosstalk_epsilon = cfg.crosstalk_epsilon;
  prepared.c4.crosstalk_epsilon = cfg.crosstalk_epsilon;
  prepared.c3.validate();
  prepared.c4.validate();
  return prepared;
}

std::pair<double, double> detection_probabilities(const PreparedScenario &prepared, double phi) {
  MziConfig mzi = prepared.mzi;
  mzi.phase_phi = phi;
  OutputStates out = propagate(mzi, basis_state(0, mzi.truncation));
  if (prepared.erasers.p3 || prepared.erasers.p4) {
    out = apply_eraser(out, prepared.erasers);
  }
  return {projection_probability(out.psi_p3, prepared.c3),
          projection_probability(out.psi_p4, prepared.c4)};
}

SweepResult run_sweep(const SweepConfig &cfg) { return run_sweep(cfg, prepare_scenario(cfg)); }

SweepResult run_sweep(const SweepConfig &cfg, const PreparedScenario &prepared) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.n_phase_points);
  SweepResult result;
  result.scenario = cfg.scenario;
  result.seed = cfg.detection.rng_seed;
  result.eraser_offset = prepared.eraser_offset;
  result.phases = triangular_scan(cfg.n_phase_points, cfg.phase_span);
  result.scan_times.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    result.scan_times[k] = static_cast<double>(k) / (static_cast<double>(n) * cfg.scan_frequency);
  }

  DetectorTrace &c3 = result.c3;
  DetectorTrace &c4 = result.c4;
  c3.projector = prepared.c3;
  c4.projector = prepared.c4;
  c3.probability.resize(n);
  c4.probability.resize(n);
  parallel_for(n, [&](std::size_t k) {
    const auto [p3, p4] = detection_probabilities(prepared, result.phases[k]);
    c3.probability[k] = p3;
    c4.probability[k] = p4;
  });

  const CountingConfig &det = cfg.detection;
  const double scale = det.efficiency * det.mean_photons_per_bin() * det.n_bins_per_phase;
  const double dark = det.dark_rate * det.bin_duration * det.n_bins_per_phase;
  for (DetectorTrace *trace : {&c3, &c4}) {
    trace->expected.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      trace->expected[k] = trace->probability[k] * scale + dark;
    }
    trace->analytic_fit = fit_cosine(result.phases, trace->expected);
    trace->flatness = flatness_of(trace->expected);
    trace->raw_visibility = raw_visibility_of(trace->expected);
  }

  if (cfg.monte_carlo) {
    c3.bins.resize(n);
    c4.bins.resize(n);
    parallel_for(n, [&](std::size_t k) {
      c3.bins[k] = simulate_counts(c3.probability[k], det, k, 3);
      c4.bins[k] = simulate_counts(c4.probability[k], det, k, 4);
    });
    for (DetectorTrace *trace : {&c3, &c4}) {
      trace->counts.resize(n);
      std::vector<double> totals(n);
      for (std::size_t k = 0; k < n; ++k) {
        trace->counts[k] = std::accumulate(trace->bins[k].begin(), trace->bins[k].end(),
                                           std::int64_t{0});
        totals[k] = static_cast<double>(trace->counts[k]);
      }
      trace->fit = fit_cosine(result.phases, totals);
      trace->flatness = flatness_of(totals);
      trace->raw_visibility = raw_visibility_of(totals);
    }
  }

  result.visibility_analytic = visibility(c3.analytic_fit);
  const CosineFit &headline = c3.fit ? *c3.fit : c3.analytic_fit;
  result.visibility_fitted = visibility(headline);
  result.visibility_fitted_error = headline.visibility_error;
  result.visibility_empirical = visibility_empirical(headline);
  result.flatness_metric = c3.flatness;
  result.fringe_phase_difference = wrap_phase(c4.analytic_fit.phase - c3.analytic_fit.phase);
  return result;
}

VisibilityCalibration calibrate_to_visibility(double target, double tol, const SweepConfig &base) {
  if (!(target > 0.0 && target <= 1.0)) {
    throw CalibrationError(fmt::format("target visibility {} outside (0, 1]", target));
  }
  if (!(tol > 0.0)) {
    throw CalibrationError("visibility tolerance must be positive");
  }
  SweepConfig cfg = base;
  cfg.scenario = Scenario::erased_calibrated;
  cfg.monte_carlo = false;
  cfg.crosstalk_epsilon = 0.0;
  PreparedScenario prepared = prepare_scenario(cfg);
  const std::vector<double> phases = triangular_scan(cfg.n_phase_points, cfg.phase_span);

  auto visibility_at = [&](double eps) {
    prepared.c3.crosstalk_epsilon = eps;
    prepared.c4.crosstalk_epsilon = eps;
    return analytic_visibility(prepared, phases);
  };

  VisibilityCalibration out;
  out.eraser_offset = prepared.eraser_offset;
  double lo = 0.0;
  double hi = kEpsilonMax;
  const double v_lo = visibility_at(lo);
  const double v_hi = visibility_at(hi);
  if (target >= v_lo - tol) {
    if (target - v_lo > tol) {
      throw CalibrationError(fmt::format(
          "target V={:.6f} above the ideal-alignment visibility {:.6f} (eps in [0, {}])", target,
          v_lo, kEpsilonMax));
    }
    out.epsilon = 0.0;
    out.achieved = v_lo;
    return out;
  }
  if (target < v_hi - tol) {
    throw CalibrationError(fmt::format(
        "target V={:.6f} unreachable: V ranges over [{:.6f}, {:.6f}] for eps in [0, {}]", target,
        v_hi, v_lo, kEpsilonMax));
  }
  if (target <= v_hi) {
    out.epsilon = hi;
    out.achieved = v_hi;
    return out;
  }

  // V is non-increasing in eps. Refine well past `tol` so the returned eps
  // sits at the target, not at the edge of the tolerance band.
  double mid = 0.5 * (lo + hi);
  double v_mid = visibility_at(mid);
  const double precision = std::min(tol, 1e-9);
  for (out.iterations = 1; out.iterations < 200; ++out.iterations) {
    if (std::abs(v_mid - target) <= precision || hi - lo < 1e-14) {
      break;
    }
    if (v_mid > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    mid = 0.5 * (lo + hi);
    v_mid = visibility_at(mid);
  }
  if (std::abs(v_mid - target) > tol) {
    throw CalibrationError(fmt::format("bisection stalled at eps={:.6g} with V={:.6f}", mid, v_mid));
  }
  out.epsilon = mid;
  out.achieved = v_mid;
  return out;
}

}  // namespace oamqe
