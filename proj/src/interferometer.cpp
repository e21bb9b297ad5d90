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

#include "oamqe/interferometer.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

#include <fmt/format.h>

#include "oamqe/errors.hpp"

namespace oamqe {

namespace {

constexpr double kTruncationBudget = 1e-9;

ElementOp eraser_op(const ShiftedSppSpec &spec, const MziConfig &cfg) {
  return cfg.use_ideal_eraser ? spp_shifted_ideal(spec, cfg.truncation, cfg.oracle_grid)
                              : spp_shifted_calibrated(spec, cfg.truncation, cfg.oracle_grid);
}

ModeState erase(const ModeState &branch, const std::optional<ElementOp> &op) {
  if (!op) {
    return branch;
  }
  return apply(*op, branch).state;
}

}  // namespace

void MziConfig::validate() const {
  if (truncation < std::abs(arm_a2_spp_order) + 1) {
    throw ConfigError(fmt::format("truncation L={} too small for an arm SPP of order {}",
                                  truncation, arm_a2_spp_order));
  }
  if (!std::isfinite(phase_phi)) {
    throw ConfigError("phase must be finite");
  }
  for (const auto *spec : {&eraser_p3, &eraser_p4}) {
    if (spec->has_value()) {
      try {
        (*spec)->validate();
      } catch (const DomainError &e) {
        throw ConfigError(e.what());
      }
    }
  }
}

ElementOp mzi_operator(const MziConfig &cfg) {
  cfg.validate();
  const int L = cfg.truncation;
  // Each reflection is applied where it happens: M1 in A1; SPP then M2 in A2.
  std::vector<ElementOp> arm_a2;
  if (cfg.arm_a2_spp_order != 0) {
    arm_a2.push_back(spp_centered(cfg.arm_a2_spp_order, L));
  }
  arm_a2.push_back(mirror(L));
  const ElementOp arms = on_ports(mirror(L), compose(arm_a2));
  return compose({beam_splitter(L), arms, phase_shifter(cfg.phase_phi, L, Port::b),
                  beam_splitter(L)});
}

OutputStates propagate(const MziConfig &cfg, const ModeState &input) {
  if (input.truncation() != cfg.truncation) {
    throw DomainError(fmt::format("input state has L={}, config has L={}", input.truncation(),
                                  cfg.truncation));
  }
  const TwoPortState in(input, ModeState(cfg.truncation), {"in", "vacuum"});
  const PortApplyResult res = apply(mzi_operator(cfg), in);
  if (res.truncation_loss > kTruncationBudget) {
    throw DomainError(fmt::format("propagation lost {:.3g} of the probability to OAM truncation; "
                                  "increase L",
                                  res.truncation_loss));
  }
  OutputStates out{res.state.port_b(), res.state.port_a(), 0.0};
  out.joint_norm = out.psi_p3.norm_squared() + out.psi_p4.norm_squared();
  return out;
}

EraserOps build_eraser_ops(const MziConfig &cfg) {
  cfg.validate();
  EraserOps ops;
  if (cfg.eraser_p3) {
    ops.p3 = eraser_op(*cfg.eraser_p3, cfg);
  }
  if (cfg.eraser_p4) {
    ops.p4 = eraser_op(*cfg.eraser_p4, cfg);
  }
  return ops;
}

OutputStates apply_eraser(const OutputStates &out, const EraserOps &ops) {
  OutputStates erased{erase(out.psi_p3, ops.p3), erase(out.psi_p4, ops.p4), 0.0};
  erased.joint_norm = erased.psi_p3.norm_squared() + erased.psi_p4.norm_squared();
  return erased;
}

OutputStates apply_eraser(const OutputStates &out, const MziConfig &cfg) {
  if (!cfg.eraser_p3 && !cfg.eraser_p4) {
    throw DomainError("apply_eraser needs at least one eraser spec");
  }
  return apply_eraser(out, build_eraser_ops(cfg));
}

ShiftedSppSpec p3_eraser_spec(double offset, int arm_order) {
  return {std::abs(arm_order), offset, arm_order > 0 ? SppSense::raising : SppSense::lowering};
}

ShiftedSppSpec p4_eraser_spec(double offset, int arm_order) {
  return {std::abs(arm_order), offset, arm_order > 0 ? SppSense::lowering : SppSense::raising};
}

}  // namespace oamqe
