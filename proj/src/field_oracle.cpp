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

#include "oamqe/field_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "oamqe/errors.hpp"
#include "oamqe/parallel.hpp"

namespace oamqe {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kGaussOrder = 8;
constexpr int kStencil = 6;

std::vector<Complex> spp_mask(const GridParams &grid, int order, double offset_x, double offset_y) {
  const int n = grid.size;
  std::vector<Complex> mask(static_cast<std::size_t>(n) * n);
  for (int iy = 0; iy < n; ++iy) {
    const double y = grid.coordinate(iy) - offset_y;
    for (int ix = 0; ix < n; ++ix) {
      const double x = grid.coordinate(ix) - offset_x;
      mask[static_cast<std::size_t>(iy) * n + ix] = std::polar(1.0, order * std::atan2(y, x));
    }
  }
  return mask;
}

// Riemann sum of conj(out) * mask * in, without materializing mask * in.
Complex masked_overlap(const FieldGrid &out, std::span<const Complex> mask, const FieldGrid &in) {
  const auto a = out.samples();
  const auto b = in.samples();
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += std::conj(a[i]) * mask[i] * b[i];
  }
  return acc * out.params().cell_area();
}

std::vector<FieldGrid> lg_bank(int truncation, const GridParams &grid) {
  std::vector<FieldGrid> bank;
  bank.reserve(static_cast<std::size_t>(2 * truncation + 1));
  for (int l = -truncation; l <= truncation; ++l) {
    bank.push_back(lg_mode({l, 0, grid.waist}, grid));
  }
  return bank;
}

ComplexMatrix matrix_from_bank(const std::vector<FieldGrid> &bank, std::span<const Complex> mask) {
  const auto d = static_cast<Eigen::Index>(bank.size());
  ComplexMatrix m(d, d);
  for (Eigen::Index in = 0; in < d; ++in) {
    for (Eigen::Index out = 0; out < d; ++out) {
      m(out, in) = masked_overlap(bank[out], mask, bank[in]);
    }
  }
  return m;
}

// Lagrange weights for nodes at offsets -2..3 from floor(u), t = u - floor(u).
std::array<double, kStencil> lagrange_weights(double t) {
  std::array<double, kStencil> w{};
  for (int k = 0; k < kStencil; ++k) {
    double num = 1.0;
    double den = 1.0;
    for (int j = 0; j < kStencil; ++j) {
      if (j == k) {
        continue;
      }
      num *= t - (j - 2);
      den *= static_cast<double>(k - j);
    }
    w[k] = num / den;
  }
  return w;
}

class Interpolator {
 public:
  explicit Interpolator(const FieldGrid &field) : field_(field) {}

  Complex operator()(double x, double y) const {
    const GridParams &g = field_.params();
    const double ux = (x + g.half_width()) / g.spacing() - 0.5;
    const double uy = (y + g.half_width()) / g.spacing() - 0.5;
    const int ix0 = static_cast<int>(std::floor(ux));
    const int iy0 = static_cast<int>(std::floor(uy));
    const auto wx = lagrange_weights(ux - ix0);
    const auto wy = lagrange_weights(uy - iy0);
    const int n = field_.size();
    Complex acc{0.0, 0.0};
    for (int ky = 0; ky < kStencil; ++ky) {
      const int iy = iy0 + ky - 2;
      if (iy < 0 || iy >= n) {
        continue;
      }
      Complex row{0.0, 0.0};
      for (int kx = 0; kx < kStencil; ++kx) {
        const int ix = ix0 + kx - 2;
        if (ix < 0 || ix >= n) {
          continue;
        }
        row += wx[kx] * field_.at(ix, iy);
      }
      acc += wy[ky] * row;
    }
    return acc;
  }

 private:
  const FieldGrid &field_;
};

struct RadialNode {
  double r;
  double weight;
};

// Composite Gauss-Legendre on [0, r_max].
std::vector<RadialNode> radial_nodes(double r_max, int panels) {
  using Rule = boost::math::quadrature::gauss<double, kGaussOrder>;
  const auto &abscissa = Rule::abscissa();
  const auto &weights = Rule::weights();
  std::vector<RadialNode> nodes;
  const double h = r_max / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (std::size_t k = 0; k < abscissa.size(); ++k) {
      const double dx = 0.5 * h * abscissa[k];
      const double w = 0.5 * h * weights[k];
      if (abscissa[k] == 0.0) {
        nodes.push_back({mid, w});
      } else {
        nodes.push_back({mid - dx, w});
        nodes.push_back({mid + dx, w});
      }
    }
  }
  return nodes;
}

CalibrationPoint full_point(const std::vector<FieldGrid> &bank, int order, double offset,
                            int truncation, const GridParams &grid) {
  const auto mask = spp_mask(grid, order, offset * grid.waist, 0.0);
  CalibrationPoint point;
  point.offset = offset;
  point.matrix = matrix_from_bank(bank, mask);
  const int d = 2 * truncation + 1;
  point.radial_leakage.resize(d);
  point.out_of_window_leakage.resize(d);
  for (int in = 0; in < d; ++in) {
    const FieldGrid masked = apply_spp_mask(bank[in], order, offset * grid.waist, 0.0);
    const AzimuthalSpectrum spec = azimuthal_decomposition(masked, truncation);
    double radial = 0.0;
    for (int out = 0; out < d; ++out) {
      radial += spec.power[out] - std::norm(point.matrix(out, in));
    }
    point.radial_leakage[in] = std::max(0.0, radial);
    point.out_of_window_leakage[in] = std::max(0.0, spec.out_of_window);
  }
  return point;
}

// |M(0,0)| - |M(order,0)| from the Gaussian column only.
double balance_residual(const FieldGrid &gaussian, const FieldGrid &target, int order, double offset,
                        const GridParams &grid) {
  const auto mask = spp_mask(grid, order, offset * grid.waist, 0.0);
  return std::abs(masked_overlap(gaussian, mask, gaussian)) -
         std::abs(masked_overlap(target, mask, gaussian));
}

}  // namespace

void GridParams::validate() const {
  if (size < kMinGridSize) {
    throw ConfigError(fmt::format("grid resolution {} is below the minimum of {}", size,
                                  kMinGridSize));
  }
  if (!(extent > 0.0) || !(waist > 0.0) || !std::isfinite(extent) || !std::isfinite(waist)) {
    throw ConfigError("grid extent and waist must be positive");
  }
}

bool GridParams::same_geometry(const GridParams &other) const {
  return size == other.size && extent == other.extent && waist == other.waist;
}

FieldGrid::FieldGrid(GridParams params)
    : params_(params),
      samples_(static_cast<std::size_t>(params.size) * static_cast<std::size_t>(params.size)) {
  params_.validate();
}

FieldGrid::FieldGrid(GridParams params, std::vector<Complex> samples)
    : params_(params), samples_(std::move(samples)) {
  params_.validate();
  if (samples_.size() != static_cast<std::size_t>(params_.size) * params_.size) {
    throw DomainError("field sample count does not match the grid size");
  }
}

double FieldGrid::power() const {
  double acc = 0.0;
  for (const Complex &c : samples_) {
    acc += std::norm(c);
  }
  return acc * params_.cell_area();
}

FieldGrid lg_mode(const LgSpec &spec, const GridParams &grid) {
  grid.validate();
  if (spec.p < 0) {
    throw DomainError(fmt::format("radial index must be >= 0, got {}", spec.p));
  }
  if (!(spec.waist > 0.0)) {
    throw DomainError("LG waist must be positive");
  }
  const unsigned al = static_cast<unsigned>(std::abs(spec.l));
  const unsigned p = static_cast<unsigned>(spec.p);
  const double w = spec.waist;
  const double norm = std::sqrt(2.0 * std::exp(std::lgamma(p + 1.0) - std::lgamma(p + al + 1.0)) /
                                kPi) /
                      w;
  const int n = grid.size;
  std::vector<Complex> samples(static_cast<std::size_t>(n) * n);
  for (int iy = 0; iy < n; ++iy) {
    const double y = grid.coordinate(iy);
    for (int ix = 0; ix < n; ++ix) {
      const double x = grid.coordinate(ix);
      const double r2 = (x * x + y * y) / (w * w);
      const double radial = norm * std::pow(std::sqrt(2.0 * r2), static_cast<double>(al)) *
                            std::assoc_laguerre(p, al, 2.0 * r2) * std::exp(-r2);
      samples[static_cast<std::size_t>(iy) * n + ix] =
          std::polar(radial, spec.l * std::atan2(y, x));
    }
  }
  return FieldGrid(grid, std::move(samples));
}

FieldGrid apply_spp_mask(const FieldGrid &field, int order, double offset_x, double offset_y) {
  if (order == 0) {
    return field;
  }
  const auto mask = spp_mask(field.params(), order, offset_x, offset_y);
  const auto in = field.samples();
  std::vector<Complex> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = mask[i] * in[i];
  }
  return FieldGrid(field.params(), std::move(out));
}

Complex overlap(const FieldGrid &a, const FieldGrid &b) {
  if (!a.params().same_geometry(b.params())) {
    throw DomainError("overlap of fields on different grids");
  }
  const auto x = a.samples();
  const auto y = b.samples();
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += std::conj(x[i]) * y[i];
  }
  return acc * a.params().cell_area();
}

double AzimuthalSpectrum::in_window() const {
  double s = 0.0;
  for (double p : power) {
    s += p;
  }
  return s;
}

AzimuthalSpectrum azimuthal_decomposition(const FieldGrid &field, int truncation) {
  if (truncation < 0) {
    throw DomainError("spectrum truncation must be >= 0");
  }
  const GridParams &g = field.params();
  const int panels = std::max(8, g.size / 16);
  const auto nodes = radial_nodes(g.half_width(), panels);
  const int n_theta = 2 * g.size;
  const int d = 2 * truncation + 1;

  // e^{-i l theta_j} table, row l + L.
  std::vector<Complex> twiddle(static_cast<std::size_t>(d) * n_theta);
  std::vector<double> cos_t(n_theta);
  std::vector<double> sin_t(n_theta);
  for (int j = 0; j < n_theta; ++j) {
    const double theta = 2.0 * kPi * j / n_theta;
    cos_t[j] = std::cos(theta);
    sin_t[j] = std::sin(theta);
    for (int l = -truncation; l <= truncation; ++l) {
      twiddle[static_cast<std::size_t>(l + truncation) * n_theta + j] = std::polar(1.0, -l * theta);
    }
  }

  const Interpolator interp(field);
  AzimuthalSpectrum result;
  result.truncation = truncation;
  result.power.assign(d, 0.0);
  std::vector<Complex> ring(n_theta);
  for (const RadialNode &node : nodes) {
    double ring_power = 0.0;
    for (int j = 0; j < n_theta; ++j) {
      ring[j] = interp(node.r * cos_t[j], node.r * sin_t[j]);
      ring_power += std::norm(ring[j]);
    }
    ring_power /= n_theta;
    const double radial_weight = 2.0 * kPi * node.r * node.weight;
    double windowed = 0.0;
    for (int k = 0; k < d; ++k) {
      Complex c{0.0, 0.0};
      const Complex *row = &twiddle[static_cast<std::size_t>(k) * n_theta];
      for (int j = 0; j < n_theta; ++j) {
        c += ring[j] * row[j];
      }
      c /= static_cast<double>(n_theta);
      result.power[k] += radial_weight * std::norm(c);
      windowed += std::norm(c);
    }
    result.polar_power += radial_weight * ring_power;
    result.out_of_window += radial_weight * (ring_power - windowed);
  }
  return result;
}

std::vector<double> azimuthal_spectrum(const FieldGrid &field, int truncation) {
  return azimuthal_decomposition(field, truncation).power;
}

ComplexMatrix shifted_spp_matrix(int order, double offset, int truncation, const GridParams &grid) {
  grid.validate();
  if (truncation < 1) {
    throw DomainError("truncation must be >= 1");
  }
  const auto bank = lg_bank(truncation, grid);
  return matrix_from_bank(bank, spp_mask(grid, order, offset * grid.waist, 0.0));
}

std::vector<double> default_calibration_offsets() {
  std::vector<double> offsets;
  for (int i = 0; i <= 30; ++i) {
    offsets.push_back(0.05 * i);
  }
  return offsets;
}

double find_balanced_offset(int order, const GridParams &grid, double lo, double hi) {
  grid.validate();
  if (order == 0) {
    throw DomainError("SPP order must be non-zero");
  }
  if (!(lo >= 0.0 && hi > lo && hi < grid.extent)) {
    throw DomainError(fmt::format("invalid offset bracket [{}, {}]", lo, hi));
  }
  const FieldGrid gaussian = lg_mode({0, 0, grid.waist}, grid);
  const FieldGrid shifted = lg_mode({order, 0, grid.waist}, grid);
  auto f = [&](double d) { return balance_residual(gaussian, shifted, order, d, grid); };
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if ((f_lo < 0.0) == (f_hi < 0.0)) {
    throw CalibrationError(fmt::format(
        "|M(0,0)| - |M({},0)| does not change sign on [{}, {}] (values {:.4g}, {:.4g})", order,
        lo, hi, f_lo, f_hi));
  }
  std::uintmax_t max_iter = 64;
  const auto root = boost::math::tools::toms748_solve(
      f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(40), max_iter);
  return 0.5 * (root.first + root.second);
}

ShiftedSppCalibration calibrate_shifted_spp(int order, std::span<const double> offsets,
                                            int truncation, const GridParams &grid) {
  grid.validate();
  if (order == 0) {
    throw DomainError("SPP order must be non-zero");
  }
  if (truncation < std::abs(order)) {
    throw DomainError(fmt::format("truncation {} cannot hold order {}", truncation, order));
  }
  if (offsets.empty()) {
    throw DomainError("calibration needs at least one offset");
  }
  for (double d : offsets) {
    if (!(d >= 0.0) || d >= grid.extent) {
      throw DomainError(fmt::format("calibration offset {} outside [0, {})", d, grid.extent));
    }
  }

  ShiftedSppCalibration cal;
  cal.order = order;
  cal.truncation = truncation;
  cal.grid = grid;
  const auto bank = lg_bank(truncation, grid);
  cal.points.resize(offsets.size());
  parallel_for(offsets.size(), [&](std::size_t i) {
    cal.points[i] = full_point(bank, order, offsets[i], truncation, grid);
  });

  const int zero = mode_index(0, truncation);
  const int target = mode_index(order, truncation);
  auto residual_at = [&](const CalibrationPoint &p) {
    return std::abs(p.matrix(zero, zero)) - std::abs(p.matrix(target, zero));
  };

  // Sorted scan order, so brackets are between neighbouring offsets.
  std::vector<std::size_t> idx(offsets.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    idx[i] = i;
  }
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return offsets[a] < offsets[b]; });

  std::size_t best = idx.front();
  for (std::size_t i : idx) {
    if (std::abs(residual_at(cal.points[i])) < std::abs(residual_at(cal.points[best]))) {
      best = i;
    }
  }
  double d_star = offsets[best];
  for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
    const double lo = offsets[idx[k]];
    const double hi = offsets[idx[k + 1]];
    const double f_lo = residual_at(cal.points[idx[k]]);
    const double f_hi = residual_at(cal.points[idx[k + 1]]);
    if (f_lo == 0.0) {
      d_star = lo;
      break;
    }
    if ((f_lo < 0.0) != (f_hi < 0.0)) {
      const FieldGrid &gaussian = bank[zero];
      const FieldGrid &shifted = bank[target];
      auto f = [&](double d) { return balance_residual(gaussian, shifted, order, d, grid); };
      std::uintmax_t max_iter = 64;
      const auto root = boost::math::tools::toms748_solve(
          f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(40), max_iter);
      d_star = 0.5 * (root.first + root.second);
      break;
    }
  }

  const CalibrationPoint at_star = full_point(bank, order, d_star, truncation, grid);
  const Complex m00 = at_star.matrix(zero, zero);
  const Complex mt0 = at_star.matrix(target, zero);
  cal.best_offset = d_star;
  cal.best_matrix = at_star.matrix;
  cal.balance_ratio = std::abs(m00) / std::abs(mt0);
  cal.relative_phase = std::arg(mt0 / m00);
  double span = 0.0;
  for (int l = -1; l <= 1; ++l) {
    span += std::norm(at_star.matrix(mode_index(l, truncation), zero));
  }
  cal.span_leakage = 1.0 - span;
  cal.radial_leakage = at_star.radial_leakage[zero];
  cal.out_of_window_leakage = at_star.out_of_window_leakage[zero];
  cal.balanced = std::abs(cal.balance_ratio - 1.0) <= 0.1;
  if (!cal.balanced) {
    cal.warning = fmt::format(
        "no scanned offset balances |0> and |{}>: best ratio {:.4f} at offset {:.4f}", order,
        cal.balance_ratio, d_star);
  }
  return cal;
}

ElementOp spp_shifted_calibrated(const ShiftedSppSpec &spec, int truncation,
                                 const GridParams &grid) {
  spec.validate();
  const char *sense = spec.sense == SppSense::raising ? "raising" : "lowering";
  return ElementOp(fmt::format("spp_shifted_calibrated({},{},d={:.6g})", sense,
                               std::abs(spec.order), spec.offset),
                   shifted_spp_matrix(spec.signed_order(), spec.offset, truncation, grid),
                   truncation, PortArity::single, false, false);
}

ElementOp spp_shifted_ideal(const ShiftedSppSpec &spec, int truncation, const GridParams &grid) {
  spec.validate();
  return spp_shifted_ideal(spec, truncation,
                           shifted_spp_matrix(spec.signed_order(), spec.offset, truncation, grid));
}

}  // namespace oamqe
