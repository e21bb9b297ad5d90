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

#include <initializer_list>
#include <span>
#include <string>

#include "oamqe/mode_state.hpp"

namespace oamqe {

enum class PortArity { single = 1, dual = 2 };
enum class Port { a, b };

/// Linear optical element acting on the OAM window of one port, or on the
/// stacked [port_a, port_b] space of two ports.
///
/// `unitary` means M^dagger M = I on the truncated space. `norm_conserving`
/// means the physical element preserves probability, so any norm deficit
/// after application is attributed to truncation of the OAM window.
class ElementOp {
 public:
  ElementOp(std::string name, ComplexMatrix matrix, int truncation, PortArity arity,
            bool unitary, bool norm_conserving);

  const std::string &name() const { return name_; }
  const ComplexMatrix &matrix() const { return matrix_; }
  int truncation() const { return truncation_; }
  PortArity arity() const { return arity_; }
  bool unitary() const { return unitary_; }
  bool norm_conserving() const { return norm_conserving_; }
  int dimension() const { return static_cast<int>(matrix_.rows()); }

 private:
  std::string name_;
  ComplexMatrix matrix_;
  int truncation_;
  PortArity arity_;
  bool unitary_;
  bool norm_conserving_;
};

struct ModeApplyResult {
  ModeState state;
  /// Probability routed out of the OAM window. Zero for ops that are not
  /// norm conserving; their deficit is reported by `leakage` instead.
  double truncation_loss = 0.0;
  /// ||out||^2 - ||in||^2 for non-conserving ops (may have either sign).
  double leakage = 0.0;
};

struct PortApplyResult {
  TwoPortState state;
  double truncation_loss = 0.0;
  double leakage = 0.0;
};

ModeApplyResult apply(const ElementOp &op, const ModeState &state);
PortApplyResult apply(const ElementOp &op, const TwoPortState &state);

/// Centered spiral phase plate: |l> -> |l + order>. Amplitude pushed past
/// +-L is dropped and shows up as truncation_loss when applied.
ElementOp spp_centered(int order, int truncation);

enum class SppSense { raising, lowering };

/// Laterally displaced SPP. `offset` is in units of the beam waist.
struct ShiftedSppSpec {
  int order = 1;
  double offset = 0.5;
  SppSense sense = SppSense::raising;

  /// +|order| for raising, -|order| for lowering.
  int signed_order() const;
  void validate() const;
};

/// Idealized half-offset SPP. For the raising sense with order m:
///   |0> -> (|0> + |m>)/sqrt(2),  |-m> -> (|-m> + |0>)/sqrt(2);
/// for lowering, m -> -m. Every other column is copied from
/// `calibrated_fill`, which must be (2L+1) x (2L+1).
///
/// The result is not unitary (two orthogonal inputs overlap at |0>), so it is
/// flagged non-unitary and never renormalized.
ElementOp spp_shifted_ideal(const ShiftedSppSpec &spec, int truncation,
                            const ComplexMatrix &calibrated_fill);

/// Reflection: |l> -> e^{i pi} |-l>.
ElementOp mirror(int truncation);

/// Symmetric 50/50 splitter on [a, b]. Transmission 1/sqrt(2) keeps l;
/// reflection i/sqrt(2) maps l -> -l.
ElementOp beam_splitter(int truncation);

/// e^{i phi} on `arm`, identity on the other port.
ElementOp phase_shifter(double phi, int truncation, Port arm = Port::b);

ElementOp identity(int truncation, PortArity arity);

/// Lifts a single-port op onto one port of a two-port space.
ElementOp on_port(const ElementOp &op, Port port);

/// Block-diagonal two-port op applying `on_a` to port a and `on_b` to port b.
ElementOp on_ports(const ElementOp &on_a, const ElementOp &on_b);

/// Product in application order: ops.front() acts first.
ElementOp compose(std::span<const ElementOp> ops);
ElementOp compose(std::initializer_list<ElementOp> ops);

/// max_ij |(M^dagger M - I)_ij|.
double unitarity_error(const ElementOp &op);

/// Spectral norm of M^dagger M - I: how far the op is from conserving
/// probability for the worst-case input.
double completeness_deficit(const ElementOp &op);

/// Header line "# name=<name> rows=<r> cols=<c> unitary=<0|1>", then one
/// row per line of space-separated "re,im" pairs.
std::string dump_matrix(const ElementOp &op);

}  // namespace oamqe
