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

#include <optional>

#include "oamqe/elements.hpp"
#include "oamqe/field_oracle.hpp"
#include "oamqe/mode_state.hpp"

namespace oamqe {

/// Mach-Zehnder layout. The photon enters port a of BS1; arm A1 is port a
/// (mirror M1), arm A2 is port b (SPP, mirror M2, phase phi). After BS2,
/// port b is P3 and port a is P4.
struct MziConfig {
  /// 0 disables the arm SPP (plain balanced interferometer).
  int arm_a2_spp_order = 1;
  double phase_phi = 0.0;
  std::optional<ShiftedSppSpec> eraser_p3;
  std::optional<ShiftedSppSpec> eraser_p4;
  /// Idealized half-offset operator when true, oracle matrix otherwise.
  bool use_ideal_eraser = true;
  int truncation = kDefaultTruncation;
  GridParams oracle_grid;

  /// Throws ConfigError when L < |arm_a2_spp_order| + 1.
  void validate() const;
};

struct OutputStates {
  ModeState psi_p3;
  ModeState psi_p4;
  /// ||psi_p3||^2 + ||psi_p4||^2.
  double joint_norm = 0.0;
};

/// Full two-port operator from BS1 input to BS2 output.
ElementOp mzi_operator(const MziConfig &cfg);

/// Unnormalized P3/P4 branches for `input` entering port a.
/// Throws DomainError if more than 1e-9 probability leaves the OAM window.
OutputStates propagate(const MziConfig &cfg, const ModeState &input);

/// Eraser operators built once per configuration, since the oracle-backed
/// ones cost a grid evaluation.
struct EraserOps {
  std::optional<ElementOp> p3;
  std::optional<ElementOp> p4;
};

EraserOps build_eraser_ops(const MziConfig &cfg);

OutputStates apply_eraser(const OutputStates &out, const EraserOps &ops);
OutputStates apply_eraser(const OutputStates &out, const MziConfig &cfg);

/// Eraser placement matching the arm SPP: P3 carries |-order>, so it gets the
/// raising sense for a positive arm order; P4 gets the opposite sense.
ShiftedSppSpec p3_eraser_spec(double offset, int arm_order = 1);
ShiftedSppSpec p4_eraser_spec(double offset, int arm_order = 1);

}  // namespace oamqe
