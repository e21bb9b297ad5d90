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

// Transverse-field oracle. Fields live on a cell-centred Cartesian grid and
// every integral is a plain Riemann sum over it. The azimuthal spectrum is the
// one exception: it resamples onto a polar grid (6-point Lagrange
// interpolation, composite Gauss-Legendre in r, trapezoid in theta).

#pragma once

#include <span>
#include <string>
#include <vector>

#include "oamqe/elements.hpp"
#include "oamqe/mode_state.hpp"

namespace oamqe {

inline constexpr int kMinGridSize = 128;

struct GridParams {
  int size = 512;
  /// Half-width of the square window, in units of `waist`.
  double extent = 6.0;
  /// Reference length w0. Physical coordinates are measured in the same unit.
  double waist = 1.0;

  /// Throws ConfigError for N < 128 or non-positive lengths.
  void validate() const;
  double half_width() const { return extent * waist; }
  double spacing() const { return 2.0 * half_width() / size; }
  double cell_area() const { return spacing() * spacing(); }
  /// Physical coordinate of cell centre i along either axis.
  double coordinate(int i) const { return -half_width() + (i + 0.5) * spacing(); }
  bool same_geometry(const GridParams &other) const;
};

/// N x N complex scalar field, row-major with y as the slow index.
class FieldGrid {
 public:
  explicit FieldGrid(GridParams params);
  FieldGrid(GridParams params, std::vector<Complex> samples);

  const GridParams &params() const { return params_; }
  int size() const { return params_.size; }
  Complex at(int ix, int iy) const { return samples_[static_cast<std::size_t>(iy) * size() + ix]; }
  std::span<const Complex> samples() const { return samples_; }
  /// Sum |E|^2 dA.
  double power() const;

 private:
  GridParams params_;
  std::vector<Complex> samples_;
};

struct LgSpec {
  int l = 0;
  int p = 0;
  double waist = 1.0;
};

/// Normalized Laguerre-Gauss mode at the waist plane:
///   C (sqrt2 r/w)^|l| L_p^|l|(2 r^2/w^2) exp(-r^2/w^2) exp(i l theta).
FieldGrid lg_mode(const LgSpec &spec, const GridParams &grid);

/// Pointwise exp(i order atan2(y - offset_y, x - offset_x)). Offsets are
/// physical coordinates.
FieldGrid apply_spp_mask(const FieldGrid &field, int order, double offset_x, double offset_y = 0.0);

/// integral conj(a) b dA. Throws DomainError for different grid geometry.
Complex overlap(const FieldGrid &a, const FieldGrid &b);

struct AzimuthalSpectrum {
  int truncation = 0;
  /// P_l = 2 pi integral |c_l(r)|^2 r dr for l in [-L, L] (index l + L).
  std::vector<double> power;
  /// Polar-quadrature power carried by |l| > L.
  double out_of_window = 0.0;
  /// Total power seen by the polar quadrature.
  double polar_power = 0.0;

  double in_window() const;
  double at(int l) const { return power.at(static_cast<std::size_t>(mode_index(l, truncation))); }
};

AzimuthalSpectrum azimuthal_decomposition(const FieldGrid &field, int truncation);
/// Convenience: just the windowed P_l vector.
std::vector<double> azimuthal_spectrum(const FieldGrid &field, int truncation);

/// Mode-space matrix of an SPP of signed `order` displaced by `offset`
/// (units of w0) along x: M(l_out, l_in) = <LG(l_out,0) | mask LG(l_in,0)>.
/// Radial (p > 0) content is dropped by construction.
ComplexMatrix shifted_spp_matrix(int order, double offset, int truncation, const GridParams &grid);

struct CalibrationPoint {
  double offset = 0.0;
  ComplexMatrix matrix;
  /// Per input column: windowed power in p > 0 modes.
  std::vector<double> radial_leakage;
  /// Per input column: power outside the OAM window.
  std::vector<double> out_of_window_leakage;
};

struct ShiftedSppCalibration {
  int order = 1;
  int truncation = kDefaultTruncation;
  GridParams grid;
  std::vector<CalibrationPoint> points;

  /// d*: offset where |M(0,0)| = |M(order,0)|, refined between grid points.
  double best_offset = 0.0;
  ComplexMatrix best_matrix;
  /// |M(0,0)| / |M(order,0)| at d*.
  double balance_ratio = 0.0;
  /// arg(M(order,0) / M(0,0)) at d*; zero for the idealized operator.
  double relative_phase = 0.0;
  /// 1 - sum_{|l|<=1} |M(l,0)|^2 at d*: everything the three-mode ideal
  /// operator ignores, radial content included.
  double span_leakage = 0.0;
  double radial_leakage = 0.0;
  double out_of_window_leakage = 0.0;
  /// False when no scanned offset gets the ratio within 10% of one.
  bool balanced = false;
  std::string warning;
};

std::vector<double> default_calibration_offsets();

/// d* from the Gaussian column alone: the root of |M(0,0)| - |M(order,0)|
/// in [lo, hi] (units of w0). Throws CalibrationError without a sign change.
double find_balanced_offset(int order, const GridParams &grid = {}, double lo = 0.0,
                            double hi = 1.5);

/// Scans `offsets` (units of w0, each in [0, extent)) and locates d*.
/// Never throws on an unbalanced scan; see `balanced` and `warning`.
ShiftedSppCalibration calibrate_shifted_spp(int order, std::span<const double> offsets,
                                            int truncation, const GridParams &grid = {});

/// The oracle matrix at spec.offset, wrapped as a (non-unitary) element.
ElementOp spp_shifted_calibrated(const ShiftedSppSpec &spec, int truncation,
                                 const GridParams &grid = {});

/// spp_shifted_ideal with its unspecified columns taken from the oracle at
/// spec.offset.
ElementOp spp_shifted_ideal(const ShiftedSppSpec &spec, int truncation, const GridParams &grid);

}  // namespace oamqe
