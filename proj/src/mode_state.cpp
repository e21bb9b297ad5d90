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

#include "oamqe/mode_state.hpp"

#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "oamqe/errors.hpp"

namespace oamqe {

ModeState::ModeState(int truncation)
    : truncation_(truncation), amplitudes_(ComplexVector::Zero(2 * truncation + 1)) {
  if (truncation < 1) {
    throw DomainError(fmt::format("truncation must be >= 1, got {}", truncation));
  }
}

ModeState::ModeState(int truncation, ComplexVector amplitudes)
    : truncation_(truncation), amplitudes_(std::move(amplitudes)) {
  if (truncation < 1) {
    throw DomainError(fmt::format("truncation must be >= 1, got {}", truncation));
  }
  if (amplitudes_.size() != 2 * truncation + 1) {
    throw DomainError(fmt::format("amplitude vector has length {}, expected {}",
                                  amplitudes_.size(), 2 * truncation + 1));
  }
}

Complex ModeState::amplitude(int l) const {
  if (!contains(l)) {
    throw DomainError(fmt::format("mode outside truncation: l={} with L={}", l, truncation_));
  }
  return amplitudes_[mode_index(l, truncation_)];
}

bool ModeState::is_normalized() const {
  return std::abs(norm_squared() - 1.0) <= kAmplitudeTolerance;
}

ModeState ModeState::scaled(Complex factor) const {
  return ModeState(truncation_, amplitudes_ * factor);
}

ModeState ModeState::with_added(int l, Complex factor) const {
  if (!contains(l)) {
    throw DomainError(fmt::format("mode outside truncation: l={} with L={}", l, truncation_));
  }
  ComplexVector v = amplitudes_;
  v[mode_index(l, truncation_)] += factor;
  return ModeState(truncation_, std::move(v));
}

ModeState operator+(const ModeState &a, const ModeState &b) {
  if (a.truncation() != b.truncation()) {
    throw DomainError("cannot add states with different truncation");
  }
  return ModeState(a.truncation(), a.amplitudes() + b.amplitudes());
}

ModeState basis_state(int l, int truncation) {
  ModeState zero(truncation);
  if (!zero.contains(l)) {
    throw DomainError(fmt::format("mode outside truncation: l={} with L={}", l, truncation));
  }
  return zero.with_added(l, 1.0);
}

Complex inner_product(const ModeState &a, const ModeState &b) {
  if (a.truncation() != b.truncation()) {
    throw DomainError(fmt::format("inner product of states with L={} and L={}",
                                  a.truncation(), b.truncation()));
  }
  // Eigen's dot() conjugates its first argument.
  return a.amplitudes().dot(b.amplitudes());
}

double norm(const ModeState &s) { return s.norm(); }

ModeState normalize(const ModeState &s) {
  const double n = s.norm();
  if (n == 0.0) {
    throw DomainError("null state cannot be normalized");
  }
  return s.scaled(1.0 / n);
}

double max_amplitude_distance(const ModeState &a, const ModeState &b) {
  if (a.truncation() != b.truncation()) {
    throw DomainError("cannot compare states with different truncation");
  }
  return (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff();
}

std::string to_text(const ModeState &s) {
  std::string out;
  for (int l = -s.truncation(); l <= s.truncation(); ++l) {
    const Complex c = s.amplitude(l);
    out += fmt::format("{} {:.17g},{:.17g}\n", l, c.real(), c.imag());
  }
  return out;
}

TwoPortState::TwoPortState(ModeState port_a, ModeState port_b, std::array<std::string, 2> labels)
    : port_a_(std::move(port_a)), port_b_(std::move(port_b)), labels_(std::move(labels)) {
  if (port_a_.truncation() != port_b_.truncation()) {
    throw DomainError("both ports must share the same truncation");
  }
}

ComplexVector TwoPortState::stacked() const {
  const int d = port_a_.dimension();
  ComplexVector v(2 * d);
  v.head(d) = port_a_.amplitudes();
  v.tail(d) = port_b_.amplitudes();
  return v;
}

TwoPortState TwoPortState::from_stacked(const ComplexVector &v, int truncation,
                                        std::array<std::string, 2> labels) {
  const int d = 2 * truncation + 1;
  if (v.size() != 2 * d) {
    throw DomainError(fmt::format("two-port vector has length {}, expected {}", v.size(), 2 * d));
  }
  return TwoPortState(ModeState(truncation, v.head(d)), ModeState(truncation, v.tail(d)),
                      std::move(labels));
}

}  // namespace oamqe
