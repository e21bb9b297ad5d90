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

#include "oamqe/elements.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "oamqe/errors.hpp"

namespace oamqe {

namespace {

int port_dimension(int truncation) { return 2 * truncation + 1; }

void check_truncation(int truncation) {
  if (truncation < 1) {
    throw DomainError(fmt::format("truncation must be >= 1, got {}", truncation));
  }
}

// Drops the imaginary round-off of e^{i pi}.
const Complex kReflectionPhase{-1.0, 0.0};

}  // namespace

ElementOp::ElementOp(std::string name, ComplexMatrix matrix, int truncation, PortArity arity,
                     bool unitary, bool norm_conserving)
    : name_(std::move(name)),
      matrix_(std::move(matrix)),
      truncation_(truncation),
      arity_(arity),
      unitary_(unitary),
      norm_conserving_(norm_conserving) {
  check_truncation(truncation);
  const int expected = static_cast<int>(arity) * port_dimension(truncation);
  if (matrix_.rows() != expected || matrix_.cols() != expected) {
    throw DomainError(fmt::format("{}: matrix is {}x{}, expected {}x{}", name_, matrix_.rows(),
                                  matrix_.cols(), expected, expected));
  }
}

ModeApplyResult apply(const ElementOp &op, const ModeState &state) {
  if (op.arity() != PortArity::single) {
    throw DomainError(fmt::format("{} acts on two ports, not on a single ModeState", op.name()));
  }
  if (op.truncation() != state.truncation()) {
    throw DomainError(fmt::format("{} has L={}, state has L={}", op.name(), op.truncation(),
                                  state.truncation()));
  }
  ModeState out(state.truncation(), op.matrix() * state.amplitudes());
  const double delta = out.norm_squared() - state.norm_squared();
  if (op.norm_conserving()) {
    return {std::move(out), std::max(0.0, -delta), 0.0};
  }
  return {std::move(out), 0.0, delta};
}

PortApplyResult apply(const ElementOp &op, const TwoPortState &state) {
  if (op.arity() != PortArity::dual) {
    throw DomainError(fmt::format("{} is a single-port op; lift it with on_port()", op.name()));
  }
  if (op.truncation() != state.truncation()) {
    throw DomainError(fmt::format("{} has L={}, state has L={}", op.name(), op.truncation(),
                                  state.truncation()));
  }
  TwoPortState out = TwoPortState::from_stacked(op.matrix() * state.stacked(), state.truncation(),
                                                state.labels());
  const double delta = out.joint_norm_squared() - state.joint_norm_squared();
  if (op.norm_conserving()) {
    return {std::move(out), std::max(0.0, -delta), 0.0};
  }
  return {std::move(out), 0.0, delta};
}

ElementOp spp_centered(int order, int truncation) {
  check_truncation(truncation);
  if (order == 0) {
    throw DomainError("SPP order must be non-zero");
  }
  const int d = port_dimension(truncation);
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  bool drops = false;
  for (int l = -truncation; l <= truncation; ++l) {
    const int target = l + order;
    if (target < -truncation || target > truncation) {
      drops = true;
      continue;
    }
    m(mode_index(target, truncation), mode_index(l, truncation)) = 1.0;
  }
  return ElementOp(fmt::format("spp({:+d})", order), std::move(m), truncation, PortArity::single,
                   !drops, true);
}

int ShiftedSppSpec::signed_order() const {
  const int m = std::abs(order);
  return sense == SppSense::raising ? m : -m;
}

void ShiftedSppSpec::validate() const {
  if (order == 0) {
    throw DomainError("shifted SPP order must be non-zero");
  }
  if (!(offset >= 0.0) || !std::isfinite(offset)) {
    throw DomainError(fmt::format("shifted SPP offset must be finite and >= 0, got {}", offset));
  }
}

ElementOp spp_shifted_ideal(const ShiftedSppSpec &spec, int truncation,
                            const ComplexMatrix &calibrated_fill) {
  spec.validate();
  check_truncation(truncation);
  const int d = port_dimension(truncation);
  const int m = spec.signed_order();
  if (std::abs(m) > truncation) {
    throw DomainError(fmt::format("shifted SPP order {} exceeds truncation {}", m, truncation));
  }
  if (calibrated_fill.rows() != d || calibrated_fill.cols() != d) {
    throw DomainError(fmt::format("calibrated fill is {}x{}, expected {}x{}",
                                  calibrated_fill.rows(), calibrated_fill.cols(), d, d));
  }
  ComplexMatrix mat = calibrated_fill;
  const double h = 1.0 / std::numbers::sqrt2;
  const int zero = mode_index(0, truncation);
  const int up = mode_index(m, truncation);
  const int down = mode_index(-m, truncation);
  mat.col(zero).setZero();
  mat(zero, zero) = h;
  mat(up, zero) = h;
  mat.col(down).setZero();
  mat(down, down) = h;
  mat(zero, down) = h;
  const char *sense = spec.sense == SppSense::raising ? "raising" : "lowering";
  return ElementOp(fmt::format("spp_shifted_ideal({},{})", sense, std::abs(spec.order)),
                   std::move(mat), truncation, PortArity::single, false, false);
}

ElementOp mirror(int truncation) {
  check_truncation(truncation);
  const int d = port_dimension(truncation);
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (int l = -truncation; l <= truncation; ++l) {
    m(mode_index(-l, truncation), mode_index(l, truncation)) = kReflectionPhase;
  }
  return ElementOp("mirror", std::move(m), truncation, PortArity::single, true, true);
}

ElementOp beam_splitter(int truncation) {
  check_truncation(truncation);
  const int d = port_dimension(truncation);
  const double t = 1.0 / std::numbers::sqrt2;
  const Complex r{0.0, t};
  ComplexMatrix m = ComplexMatrix::Zero(2 * d, 2 * d);
  for (int l = -truncation; l <= truncation; ++l) {
    const int in = mode_index(l, truncation);
    const int flipped = mode_index(-l, truncation);
    m(in, in) = t;
    m(d + in, d + in) = t;
    m(d + flipped, in) = r;
    m(flipped, d + in) = r;
  }
  return ElementOp("beam_splitter", std::move(m), truncation, PortArity::dual, true, true);
}

ElementOp phase_shifter(double phi, int truncation, Port arm) {
  check_truncation(truncation);
  const int d = port_dimension(truncation);
  ComplexMatrix m = ComplexMatrix::Identity(2 * d, 2 * d);
  const int offset = arm == Port::a ? 0 : d;
  const Complex phase = std::polar(1.0, phi);
  for (int i = 0; i < d; ++i) {
    m(offset + i, offset + i) = phase;
  }
  return ElementOp(fmt::format("phase({:.6g})", phi), std::move(m), truncation, PortArity::dual,
                   true, true);
}

ElementOp identity(int truncation, PortArity arity) {
  check_truncation(truncation);
  const int d = static_cast<int>(arity) * port_dimension(truncation);
  return ElementOp("identity", ComplexMatrix::Identity(d, d), truncation, arity, true, true);
}

ElementOp on_port(const ElementOp &op, Port port) {
  const ElementOp id = identity(op.truncation(), PortArity::single);
  return port == Port::a ? on_ports(op, id) : on_ports(id, op);
}

ElementOp on_ports(const ElementOp &on_a, const ElementOp &on_b) {
  if (on_a.arity() != PortArity::single || on_b.arity() != PortArity::single) {
    throw DomainError("on_ports expects two single-port ops");
  }
  if (on_a.truncation() != on_b.truncation()) {
    throw DomainError("on_ports: truncation mismatch");
  }
  const int d = on_a.dimension();
  ComplexMatrix m = ComplexMatrix::Zero(2 * d, 2 * d);
  m.topLeftCorner(d, d) = on_a.matrix();
  m.bottomRightCorner(d, d) = on_b.matrix();
  return ElementOp(fmt::format("[{} | {}]", on_a.name(), on_b.name()), std::move(m),
                   on_a.truncation(), PortArity::dual, on_a.unitary() && on_b.unitary(),
                   on_a.norm_conserving() && on_b.norm_conserving());
}

ElementOp compose(std::span<const ElementOp> ops) {
  if (ops.empty()) {
    throw DomainError("compose of an empty op list");
  }
  const ElementOp &first = ops.front();
  ComplexMatrix m = first.matrix();
  std::string name = first.name();
  bool unitary = first.unitary();
  bool conserving = first.norm_conserving();
  for (const ElementOp &op : ops.subspan(1)) {
    if (op.arity() != first.arity() || op.truncation() != first.truncation()) {
      throw DomainError(fmt::format("compose: {} is incompatible with {}", op.name(), first.name()));
    }
    m = op.matrix() * m;
    name = fmt::format("{} . {}", op.name(), name);
    unitary = unitary && op.unitary();
    conserving = conserving && op.norm_conserving();
  }
  return ElementOp(std::move(name), std::move(m), first.truncation(), first.arity(), unitary,
                   conserving);
}

ElementOp compose(std::initializer_list<ElementOp> ops) {
  return compose(std::span<const ElementOp>(ops.begin(), ops.size()));
}

double unitarity_error(const ElementOp &op) {
  const ComplexMatrix &m = op.matrix();
  const ComplexMatrix g = m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols());
  return g.cwiseAbs().maxCoeff();
}

double completeness_deficit(const ElementOp &op) {
  const ComplexMatrix &m = op.matrix();
  const ComplexMatrix g = m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(g, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

std::string dump_matrix(const ElementOp &op) {
  const ComplexMatrix &m = op.matrix();
  std::string out = fmt::format("# name={} rows={} cols={} unitary={}\n", op.name(), m.rows(),
                                m.cols(), op.unitary() ? 1 : 0);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) {
        out += ' ';
      }
      out += fmt::format("{:.17g},{:.17g}", m(i, j).real(), m(i, j).imag());
    }
    out += '\n';
  }
  return out;
}

}  // namespace oamqe
