// Copyright 2026 The cvqnd Authors
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

#include "cvqnd/symplectic.h"

#include "gtest/gtest.h"

#include "cvqnd/mc_oracle.h"
#include "cvqnd/random.h"
#include "cvqnd/resource_states.h"
#include "test_util.h"

#include <numbers>

using namespace cvqnd;
using cvqnd_test::max_abs_diff;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(symplectic, qnd_coupling) {
  EXPECT_EQ(qnd_coupling(0.0).matrix(), Matrix<double>::Identity(4, 4));
  auto out = apply(vacuum(2), qnd_coupling(1.0));
  EXPECT_DOUBLE_EQ(out.variance(0, Quadrature::X), 0.5);
  EXPECT_DOUBLE_EQ(out.variance(0, Quadrature::P), 1.0);
  EXPECT_DOUBLE_EQ(out.variance(1, Quadrature::X), 1.0);
  EXPECT_DOUBLE_EQ(out.variance(1, Quadrature::P), 0.5);
  EXPECT_DOUBLE_EQ(apply(vacuum(2), qnd_coupling(2.0)).variance(1, Quadrature::X), 2.5);
  for (double g : {-3.0, 0.1, 1.0, 7.0}) EXPECT_EQ(symplectic_defect(qnd_coupling(g).matrix()), 0.0);
}

TEST(symplectic, qnd_coupling_sampled) {
  auto out = apply(vacuum(2), qnd_coupling(1.0));
  auto m = mc::empirical_moments(mc::sample_state(vacuum(2), 1000000, 5));
  // Push the raw vacuum samples through the map by hand.
  Matrix<double> s = cvqnd_test::qnd_matrix(1.0);
  Matrix<double> pushed = s * m.cov * s.transpose();
  EXPECT_NEAR(pushed(1, 1), out.cov()(1, 1), 5 * std::sqrt(2.0 / 1e6));
  EXPECT_NEAR(pushed(2, 2), out.cov()(2, 2), 5 * std::sqrt(2.0 / 1e6));
}

TEST(symplectic, phase_shift) {
  EXPECT_LT(max_abs_diff(phase_shift(0.0).matrix(), Matrix<double>::Identity(2, 2)), 1e-16);
  EXPECT_LT(max_abs_diff(phase_shift(kPi).matrix(), -Matrix<double>::Identity(2, 2)), 1e-15);
  EXPECT_LT(max_abs_diff(compose(phase_shift(kPi / 2), phase_shift(kPi / 2)).matrix(), phase_shift(kPi).matrix()),
            1e-15);
}

TEST(symplectic, sign_flipped_sandwich) {
  EXPECT_EQ(qnd_sign_flipped(0.0).matrix(), Matrix<double>::Identity(4, 4));
  // Modes (B, C); the coupling acts with C in the first slot, flips act on C.
  const auto flip = embed(phase_shift(kPi), {1}, 2);
  for (double g : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    auto sandwich = compose(flip, compose(embed(qnd_coupling(g), {1, 0}, 2), flip));
    EXPECT_LE(max_abs_diff(sandwich.matrix(), qnd_sign_flipped(g).matrix()), 1e-14) << g;
  }
  auto out = apply(vacuum(2), qnd_sign_flipped(1.0));
  EXPECT_DOUBLE_EQ(out.variance(0, Quadrature::X), 1.0);
  EXPECT_DOUBLE_EQ(out.variance(1, Quadrature::P), 1.0);
}

TEST(symplectic, squeezer) {
  EXPECT_EQ(squeezer(0.0).matrix(), Matrix<double>::Identity(2, 2));
  EXPECT_LT(max_abs_diff(compose(squeezer(1.3), squeezer(-1.3)).matrix(), Matrix<double>::Identity(2, 2)), 1e-15);
  EXPECT_LT(max_abs_diff(apply(vacuum(1), squeezer(1.0)).cov(), squeezed_vacuum(1.0, SqueezeAxis::P).cov()), 1e-15);
}

TEST(symplectic, balanced_beam_splitter) {
  auto bs = balanced_beam_splitter();
  EXPECT_LT(max_abs_diff(apply(vacuum(2), bs).cov(), vacuum(2).cov()), 1e-15);
  // This mixer is a reflection, so it squares to the identity.
  EXPECT_LT(max_abs_diff(compose(bs, bs).matrix(), Matrix<double>::Identity(4, 4)), 1e-15);
  auto in = tensor(squeezed_vacuum(0.8, SqueezeAxis::X), squeezed_vacuum(0.8, SqueezeAxis::P));
  EXPECT_LT(max_abs_diff(apply(in, bs).cov(), epr_pair(0.8).cov()), 1e-15);
}

TEST(symplectic, rejects_non_symplectic) {
  Matrix<double> m = Matrix<double>::Identity(2, 2);
  m(0, 0) = 2;
  EXPECT_THROW(SymplecticMap<double>{m}, std::invalid_argument);
  EXPECT_THROW(SymplecticMap<double>{Matrix<double>::Identity(3, 3)}, std::invalid_argument);
  EXPECT_THROW(qnd_coupling(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST(symplectic, large_entries_accepted) {
  // Rounding in S Omega S^T grows like |S|^2.
  auto s = compose(embed(squeezer(5.0), {0}, 2), qnd_coupling(1e3));
  EXPECT_NO_THROW(SymplecticMap<double>{s.matrix()});
}

TEST(symplectic, embed) {
  EXPECT_EQ(embed(SymplecticMap<double>::identity(2), {0, 2}, 3).matrix(), Matrix<double>::Identity(6, 6));
  EXPECT_THROW(embed(qnd_coupling(1.0), {0, 0}, 3), std::invalid_argument);
  EXPECT_THROW(embed(qnd_coupling(1.0), {0, 3}, 3), std::invalid_argument);
  EXPECT_THROW(embed(qnd_coupling(1.0), {0}, 3), std::invalid_argument);
  std::mt19937_64 rng(17);
  for (int k = 0; k < 200; ++k) {
    auto s = random_physical_state(rng, 3);
    auto out = apply(s, embed(qnd_coupling(1.7), {0, 2}, 3));
    EXPECT_EQ(marginal(out, {1}).cov(), marginal(s, {1}).cov());
    EXPECT_EQ(marginal(out, {1}).mean(), marginal(s, {1}).mean());
  }
  // Embedding swaps the roles of the two modes when the targets are reversed.
  auto rev = embed(qnd_coupling(2.0), {1, 0}, 2).matrix();
  EXPECT_EQ(rev(3, 1), -2.0);
  EXPECT_EQ(rev(0, 2), 2.0);
}

TEST(symplectic, compose_and_inverse) {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 200; ++k) {
    const Index n = 1 + k % 3;
    auto s = random_symplectic(rng, n);
    EXPECT_EQ(compose(s, SymplecticMap<double>::identity(n)).matrix(), s.matrix());
    const double scale = std::max(1.0, s.matrix().cwiseAbs().maxCoeff());
    EXPECT_LT(max_abs_diff(compose(s, s.inverse()).matrix(), Matrix<double>::Identity(2 * n, 2 * n)),
              1e-12 * scale * scale);
  }
}

TEST(symplectic, three_mode_coupling_rows) {
  // Modes (A, B, C): Bob's sign-flipped coupling on (B, C), then Alice's on (A, C).
  const double g = 1.7;
  auto s = compose(embed(qnd_coupling(g), {0, 2}, 3), embed(qnd_sign_flipped(g), {1, 2}, 3)).matrix();
  // P'_A = P_A - g^2 P_B - g P_C
  EXPECT_DOUBLE_EQ(s(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(s(1, 3), -g * g);
  EXPECT_DOUBLE_EQ(s(1, 5), -g);
  EXPECT_DOUBLE_EQ(s(1, 0) + s(1, 2) + s(1, 4), 0.0);
}

TEST(symplectic, displacement) {
  auto c = coherent(1.0, 2.0);
  Vector<double> d(2);
  d << 0.5, -1.0;
  auto out = apply(c, Displacement<double>(d));
  EXPECT_EQ(out.cov(), c.cov());
  EXPECT_DOUBLE_EQ(out.expectation(0, Quadrature::X), 1.5);
  EXPECT_DOUBLE_EQ(out.expectation(0, Quadrature::P), 1.0);
  EXPECT_EQ(apply(c, SymplecticMap<double>::identity(1)).cov(), c.cov());
}

TEST(symplectic, apply_on_named_modes) {
  auto s = relabel(tensor(coherent(1.0, 0.0), vacuum(2)), {"A", "x", "B"});
  auto out = apply_on(s, qnd_coupling(2.0), {"A", "B"});
  EXPECT_DOUBLE_EQ(out.expectation(2, Quadrature::X), 2.0);
  EXPECT_DOUBLE_EQ(out.variance(2, Quadrature::X), 2.5);
  EXPECT_EQ(marginal(out, {1}).cov(), vacuum(1).cov());
  EXPECT_THROW(apply_on(s, qnd_coupling(1.0), {"A", "nope"}), std::invalid_argument);
}

TEST(symplectic, random_maps_are_symplectic) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 1000; ++k) {
    const Index n = 1 + k % 5;
    auto s = random_symplectic(rng, n);
    const double scale = std::max(1.0, s.matrix().squaredNorm());
    EXPECT_LE(symplectic_defect(s.matrix()), 1e-12 * scale) << k;
  }
}
