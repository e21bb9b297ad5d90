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
#include <complex>
#include <string>

#include <Eigen/Dense>

namespace oamqe {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Absolute tolerance for amplitude comparisons across the library.
inline constexpr double kAmplitudeTolerance = 1e-12;
inline constexpr int kDefaultTruncation = 3;

/// Position of OAM index `l` in a dense amplitude vector for window [-L, L].
inline int mode_index(int l, int truncation) { return l + truncation; }

/// Photon transverse phase-structure state over the truncated OAM basis
/// |l>, l in [-L, L]. Immutable once constructed.
class ModeState {
 public:
  /// Zero vector on the window [-truncation, truncation].
  explicit ModeState(int truncation = kDefaultTruncation);
  ModeState(int truncation, ComplexVector amplitudes);

  int truncation() const { return truncation_; }
  int dimension() const { return 2 * truncation_ + 1; }
  bool contains(int l) const { return l >= -truncation_ && l <= truncation_; }

  /// Amplitude of |l>; throws DomainError outside the window.
  Complex amplitude(int l) const;
  const ComplexVector &amplitudes() const { return amplitudes_; }

  double norm_squared() const { return amplitudes_.squaredNorm(); }
  double norm() const { return amplitudes_.norm(); }
  bool is_normalized() const;

  ModeState scaled(Complex factor) const;
  /// Copy with `factor` added to the amplitude of |l>.
  ModeState with_added(int l, Complex factor) const;

  friend ModeState operator+(const ModeState &a, const ModeState &b);
  friend ModeState operator*(Complex factor, const ModeState &s) { return s.scaled(factor); }

 private:
  int truncation_;
  ComplexVector amplitudes_;
};

ModeState basis_state(int l, int truncation);
/// Sum_l conj(a_l) b_l. Antilinear in `a`, linear in `b`.
Complex inner_product(const ModeState &a, const ModeState &b);
double norm(const ModeState &s);
ModeState normalize(const ModeState &s);

/// Largest |a_l - b_l| over the window; throws on mismatched truncation.
double max_amplitude_distance(const ModeState &a, const ModeState &b);

/// One "l re,im" line per mode, l ascending.
std::string to_text(const ModeState &s);

/// Path superposition of two spatial ports. Amplitudes are stacked as
/// [port_a modes, port_b modes] whenever a two-port operator acts on them.
class TwoPortState {
 public:
  TwoPortState(ModeState port_a, ModeState port_b,
               std::array<std::string, 2> labels = {"A1", "A2"});

  const ModeState &port_a() const { return port_a_; }
  const ModeState &port_b() const { return port_b_; }
  const std::array<std::string, 2> &labels() const { return labels_; }
  int truncation() const { return port_a_.truncation(); }

  double joint_norm_squared() const { return port_a_.norm_squared() + port_b_.norm_squared(); }
  ComplexVector stacked() const;
  static TwoPortState from_stacked(const ComplexVector &v, int truncation,
                                   std::array<std::string, 2> labels = {"A1", "A2"});

 private:
  ModeState port_a_;
  ModeState port_b_;
  std::array<std::string, 2> labels_;
};

}  // namespace oamqe
