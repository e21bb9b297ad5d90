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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oamqe/errors.hpp"
#include "oamqe/mode_state.hpp"
#include "test_support.hpp"

namespace oamqe {
namespace {

using testing::random_state;

TEST(BasisState, SingleNonzeroAmplitude) {
  for (int l : {0, 1}) {
    const ModeState s = basis_state(l, 3);
    EXPECT_EQ(s.dimension(), 7);
    for (int k = -3; k <= 3; ++k) {
      EXPECT_EQ(s.amplitude(k), Complex(k == l ? 1.0 : 0.0, 0.0)) << "l=" << l << " k=" << k;
    }
  }
}

TEST(BasisState, OutOfWindowThrows) {
  EXPECT_THROW(basis_state(4, 3), DomainError);
  EXPECT_THROW(basis_state(-4, 3), DomainError);
  EXPECT_THROW(basis_state(0, 3).amplitude(5), DomainError);
}

TEST(InnerProduct, BasisExamples) {
  const auto z = basis_state(0, 3);
  const auto one = basis_state(1, 3);
  EXPECT_NEAR(std::abs(inner_product(z, z) - 1.0), 0.0, 1e-15);
  EXPECT_EQ(std::abs(inner_product(z, one)), 0.0);
  const auto plus = normalize(z + one);
  EXPECT_NEAR(inner_product(z, plus).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(inner_product(z, plus).imag(), 0.0, 1e-15);
}

TEST(InnerProduct, MismatchedTruncationThrows) {
  EXPECT_THROW(inner_product(basis_state(0, 2), basis_state(0, 3)), DomainError);
}

TEST(InnerProduct, SesquilinearOnRandomStates) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_state(3, rng);
    const auto b = random_state(3, rng);
    const auto c = random_state(3, rng);
    const Complex alpha(g(rng), g(rng));
    const Complex beta(g(rng), g(rng));
    // Linear in the second argument.
    const Complex lhs = inner_product(a, alpha * b + beta * c);
    const Complex rhs = alpha * inner_product(a, b) + beta * inner_product(a, c);
    EXPECT_LT(std::abs(lhs - rhs), 1e-12 * (1.0 + std::abs(rhs)));
    // Antilinear in the first.
    const Complex lhs2 = inner_product(alpha * b + beta * c, a);
    const Complex rhs2 = std::conj(alpha) * inner_product(b, a) + std::conj(beta) * inner_product(c, a);
    EXPECT_LT(std::abs(lhs2 - rhs2), 1e-12 * (1.0 + std::abs(rhs2)));
    // Hermitian symmetry and positivity.
    EXPECT_LT(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))), 1e-12);
    EXPECT_NEAR(inner_product(a, a).real(), a.norm_squared(), 1e-12);
  }
}

TEST(Norm, Examples) {
  const auto s = basis_state(0, 3) + basis_state(1, 3);
  EXPECT_NEAR(norm(s), std::sqrt(2.0), 1e-15);
  const auto n = normalize(s);
  EXPECT_NEAR(n.amplitude(0).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(n.amplitude(1).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_TRUE(n.is_normalized());
  EXPECT_FALSE(s.is_normalized());
}

TEST(Norm, ZeroVector) {
  const ModeState zero(3);
  EXPECT_EQ(norm(zero), 0.0);
  EXPECT_THROW(normalize(zero), DomainError);
}

TEST(ModeState, WithAddedAndScaled) {
  const auto s = basis_state(0, 2).with_added(-2, Complex(0.0, 2.0)).scaled(0.5);
  EXPECT_EQ(s.amplitude(0), Complex(0.5, 0.0));
  EXPECT_EQ(s.amplitude(-2), Complex(0.0, 1.0));
  EXPECT_THROW(s.with_added(3, 1.0), DomainError);
}

TEST(ModeState, DistanceAndText) {
  const auto a = basis_state(1, 1);
  const auto b = basis_state(1, 1).with_added(0, Complex(0.0, 0.25));
  EXPECT_DOUBLE_EQ(max_amplitude_distance(a, b), 0.25);
  EXPECT_EQ(to_text(b), "-1 0,0\n0 0,0.25\n1 1,0\n");
}

TEST(TwoPortState, StackRoundTrip) {
  std::mt19937_64 rng(11);
  const TwoPortState s(random_state(2, rng), random_state(2, rng), {"P3", "P4"});
  const auto back = TwoPortState::from_stacked(s.stacked(), 2, s.labels());
  EXPECT_EQ(back.port_a().amplitudes(), s.port_a().amplitudes());
  EXPECT_EQ(back.port_b().amplitudes(), s.port_b().amplitudes());
  EXPECT_EQ(back.labels()[1], "P4");
  EXPECT_NEAR(s.joint_norm_squared(), s.stacked().squaredNorm(), 1e-12);
  EXPECT_THROW(TwoPortState(basis_state(0, 1), basis_state(0, 2)), DomainError);
}

}  // namespace
}  // namespace oamqe
