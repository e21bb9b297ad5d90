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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oamqe/errors.hpp"
#include "oamqe/field_oracle.hpp"
#include "oamqe/interferometer.hpp"
#include "test_support.hpp"

namespace oamqe {
namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

std::vector<double> phase_grid(int n) {
  std::vector<double> phi(n);
  for (int k = 0; k < n; ++k) phi[k] = 2.0 * kPi * k / n;
  return phi;
}

// Magnitude of <a|b> / (|a| |b|): 1 means equal up to a global phase.
double fidelity(const ModeState &a, const ModeState &b) {
  return std::abs(inner_product(a, b)) / (a.norm() * b.norm());
}

MziConfig with_eraser(double phi, bool ideal) {
  MziConfig cfg;
  cfg.phase_phi = phi;
  cfg.use_ideal_eraser = ideal;
  cfg.oracle_grid.size = 256;
  const double d = ideal ? 0.5 : find_balanced_offset(1, cfg.oracle_grid);
  cfg.eraser_p3 = p3_eraser_spec(d);
  cfg.eraser_p4 = p4_eraser_spec(d);
  return cfg;
}

TEST(Propagate, BalancedMziWithoutSppIsAFringeExtremum) {
  // Brute force on the l = 0 subspace: BS, mirrors (-1 each), phase 0, BS.
  const double t = 1.0 / std::numbers::sqrt2;
  const Complex bs[2][2] = {{t, kI * t}, {kI * t, t}};
  Complex v[2] = {1.0, 0.0};
  auto mul = [&](const Complex m[2][2]) {
    const Complex a = m[0][0] * v[0] + m[0][1] * v[1];
    const Complex b = m[1][0] * v[0] + m[1][1] * v[1];
    v[0] = a;
    v[1] = b;
  };
  mul(bs);
  v[0] *= -1.0;
  v[1] *= -1.0;
  mul(bs);

  MziConfig cfg;
  cfg.arm_a2_spp_order = 0;
  const auto out = propagate(cfg, basis_state(0, cfg.truncation));
  EXPECT_NEAR(out.psi_p4.norm_squared(), std::norm(v[0]), 1e-15);
  EXPECT_NEAR(out.psi_p3.norm_squared(), std::norm(v[1]), 1e-15);
  EXPECT_NEAR(std::max(out.psi_p3.norm_squared(), out.psi_p4.norm_squared()), 1.0, 1e-15);
}

TEST(Propagate, OutputStatesMatchThePaperForms) {
  const MziConfig base;
  for (double phi : phase_grid(24)) {
    MziConfig cfg = base;
    cfg.phase_phi = phi;
    const auto out = propagate(cfg, basis_state(0, 3));
    const Complex e = std::polar(1.0, phi);
    // P3 ~ |0> + e^{i phi}|-1>; P4 ~ |0> + e^{i (phi + pi)}|+1>.
    const auto p3 = basis_state(0, 3) + basis_state(-1, 3).scaled(e);
    const auto p4 = basis_state(0, 3) + basis_state(1, 3).scaled(-e);
    EXPECT_NEAR(fidelity(out.psi_p3, p3), 1.0, 1e-12) << "phi=" << phi;
    EXPECT_NEAR(fidelity(out.psi_p4, p4), 1.0, 1e-12) << "phi=" << phi;
    for (int l : {0, -1}) EXPECT_NEAR(std::abs(out.psi_p3.amplitude(l)), 0.5, 1e-12);
    for (int l : {0, 1}) EXPECT_NEAR(std::abs(out.psi_p4.amplitude(l)), 0.5, 1e-12);
    EXPECT_EQ(std::abs(out.psi_p3.amplitude(1)), 0.0);
    EXPECT_EQ(std::abs(out.psi_p4.amplitude(-1)), 0.0);
    EXPECT_NEAR(out.joint_norm, 1.0, 1e-12);
  }
}

TEST(Propagate, WhichPathProjectionsAreFlat) {
  std::vector<double> p[4];
  for (double phi : phase_grid(100)) {
    MziConfig cfg;
    cfg.phase_phi = phi;
    const auto out = propagate(cfg, basis_state(0, 3));
    p[0].push_back(std::norm(out.psi_p3.amplitude(0)));
    p[1].push_back(std::norm(out.psi_p3.amplitude(-1)));
    p[2].push_back(std::norm(out.psi_p4.amplitude(0)));
    p[3].push_back(std::norm(out.psi_p4.amplitude(1)));
  }
  for (const auto &series : p) {
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    EXPECT_LT(*hi - *lo, 1e-12);
    EXPECT_NEAR(*lo, 0.25, 1e-12);
  }
}

TEST(Propagate, NormConservedForRandomInputs) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  for (int trial = 0; trial < 200; ++trial) {
    MziConfig cfg;
    cfg.truncation = 2 + trial % 4;
    cfg.arm_a2_spp_order = trial % 3 == 0 ? -1 : 1;
    cfg.phase_phi = u(rng);
    // Reflection at BS1 sends l to -l before the arm SPP; keep clear of the
    // window edge it would push past.
    const int lo = cfg.arm_a2_spp_order > 0 ? -cfg.truncation + 1 : -cfg.truncation;
    const int hi = cfg.arm_a2_spp_order > 0 ? cfg.truncation : cfg.truncation - 1;
    const auto in = testing::random_unit_state(cfg.truncation, rng, lo, hi);
    EXPECT_NEAR(propagate(cfg, in).joint_norm, 1.0, 1e-12);
  }
}

TEST(Propagate, TruncationLossIsAnError) {
  MziConfig cfg;
  EXPECT_THROW(propagate(cfg, basis_state(-3, 3)), DomainError);
  EXPECT_NO_THROW(propagate(cfg, basis_state(3, 3)));
  EXPECT_THROW(propagate(cfg, basis_state(0, 2)), DomainError);
  cfg.truncation = 1;
  EXPECT_THROW(propagate(cfg, basis_state(0, 1)), ConfigError);
}

TEST(Eraser, IdealCoefficientsOnTheP3State) {
  const auto ops = build_eraser_ops(with_eraser(0.0, true));
  for (double phi : phase_grid(16)) {
    const Complex e = std::polar(1.0, phi);
    const auto eq1 = (basis_state(0, 3) + basis_state(-1, 3).scaled(e)).scaled(1.0 / std::sqrt(2.0));
    const auto s = apply(*ops.p3, eq1).state;
    EXPECT_LT(std::abs(s.amplitude(-1) - 0.5 * e), 1e-12);
    EXPECT_LT(std::abs(s.amplitude(0) - 0.5 * (1.0 + e)), 1e-12);
    EXPECT_LT(std::abs(s.amplitude(1) - 0.5), 1e-12);
  }
  const auto at_zero =
      apply(*ops.p3,
            (basis_state(0, 3) + basis_state(-1, 3)).scaled(1.0 / std::sqrt(2.0)))
          .state;
  EXPECT_NEAR(std::norm(at_zero.amplitude(0)), 1.0, 1e-12);
}

TEST(Eraser, IdealFringesAreAntiCorrelated) {
  auto cfg = with_eraser(0.0, true);
  const auto ops = build_eraser_ops(cfg);
  for (double phi : phase_grid(50)) {
    cfg.phase_phi = phi;
    const auto erased = apply_eraser(propagate(cfg, basis_state(0, 3)), ops);
    const double p3 = std::norm(erased.psi_p3.amplitude(0));
    const double p4 = std::norm(erased.psi_p4.amplitude(0));
    EXPECT_NEAR(p3, (1.0 + std::cos(phi)) / 4.0, 1e-12) << "phi=" << phi;
    EXPECT_NEAR(p4, (1.0 - std::cos(phi)) / 4.0, 1e-12) << "phi=" << phi;
  }
}

TEST(Eraser, CalibratedMatchesBruteForceOracle) {
  const auto probe = with_eraser(0.0, false);
  const double d = probe.eraser_p3->offset;
  const auto m3 = shifted_spp_matrix(1, d, 3, probe.oracle_grid);
  const auto m4 = shifted_spp_matrix(-1, d, 3, probe.oracle_grid);
  const auto cal = calibrate_shifted_spp(1, std::vector<double>{0.4, 0.6, 0.8}, 3, probe.oracle_grid);
  const auto ops = build_eraser_ops(probe);
  std::vector<double> fringe;
  for (double phi : phase_grid(40)) {
    auto cfg = probe;
    cfg.phase_phi = phi;
    const auto out = propagate(cfg, basis_state(0, 3));
    const auto erased = apply_eraser(out, ops);
    const ComplexVector ref3 = m3 * out.psi_p3.amplitudes();
    const ComplexVector ref4 = m4 * out.psi_p4.amplitudes();
    EXPECT_LT((erased.psi_p3.amplitudes() - ref3).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((erased.psi_p4.amplitudes() - ref4).cwiseAbs().maxCoeff(), 1e-14);
    // Weight pushed outside span{|-1>, |0>, |1>} stays within the reported leakage.
    double outside = 0.0;
    for (int l : {-3, -2, 2, 3}) outside += std::norm(erased.psi_p3.amplitude(l));
    EXPECT_LE(outside, cal.span_leakage);
    fringe.push_back(std::norm(erased.psi_p3.amplitude(0)));
  }
  // Mirror symmetry of the displaced mask keeps the |0> fringe fully modulated.
  const auto [lo, hi] = std::minmax_element(fringe.begin(), fringe.end());
  EXPECT_LT(*lo, 1e-12 * *hi);
}

TEST(Eraser, RequiresASpec) {
  MziConfig cfg;
  const auto out = propagate(cfg, basis_state(0, 3));
  EXPECT_THROW(apply_eraser(out, cfg), DomainError);
  cfg.eraser_p3 = ShiftedSppSpec{0, 0.5, SppSense::raising};
  EXPECT_THROW(build_eraser_ops(cfg), ConfigError);
}

TEST(Eraser, SpecsFollowArmOrder) {
  EXPECT_EQ(p3_eraser_spec(0.5, 1).signed_order(), 1);
  EXPECT_EQ(p4_eraser_spec(0.5, 1).signed_order(), -1);
  EXPECT_EQ(p3_eraser_spec(0.5, -1).signed_order(), -1);
}

}  // namespace
}  // namespace oamqe
