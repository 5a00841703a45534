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

#include "cvqnd/protocols.h"

#include "gtest/gtest.h"

#include "cvqnd/mc_oracle.h"
#include "cvqnd/random.h"
#include "test_util.h"

using namespace cvqnd;
using cvqnd_test::max_abs_diff;
using cvqnd_test::ModelParams;

namespace {

ProtocolConfig make(ProtocolKind kind, double ga, double gb, double r, double t = 1.0, double noise_var = 1.0) {
  ProtocolConfig c;
  c.kind = kind;
  c.gain_alice = ga;
  c.gain_bob = gb;
  c.squeezing = r;
  if (t < 1) c.channel = ChannelModel<double>(t, noise_var);
  return c;
}

cvqnd_test::LinearModel model_for(const ProtocolConfig& c) {
  ModelParams p;
  p.ga = c.gain_alice;
  p.gb = c.gain_bob;
  p.r = c.squeezing;
  p.channel = c.channel ? added_noise_of(*c.channel) : 0.0;
  p.ideal_resources = c.idealize_resources;
  switch (c.kind) {
    case ProtocolKind::Fig1:
      return cvqnd_test::fig1_model(p);
    case ProtocolKind::Fig2:
      return cvqnd_test::fig2_model(p);
    case ProtocolKind::ClassicalBenchmark:
      return cvqnd_test::classical_model(p);
    case ProtocolKind::TeleportBaseline:
      return cvqnd_test::teleport_model(p);
    case ProtocolKind::IdealQND: {
      cvqnd_test::LinearModel lm;
      lm.m = cvqnd_test::qnd_matrix(c.target_gain());
      return lm;
    }
  }
  throw std::logic_error("unreachable");
}

Vector<double> stacked_mean(const ProtocolConfig& c) {
  Vector<double> v(4);
  v << c.input_a.mean(), c.input_b.mean();
  return v;
}

Matrix<double> stacked_cov(const ProtocolConfig& c) {
  Matrix<double> m = Matrix<double>::Zero(4, 4);
  m.topLeftCorner(2, 2) = c.input_a.cov();
  m.bottomRightCorner(2, 2) = c.input_b.cov();
  return m;
}

}  // namespace

TEST(protocols, names_round_trip) {
  for (auto kind : kAllProtocolKinds) EXPECT_EQ(parse_protocol_kind(to_string(kind)), kind);
  EXPECT_FALSE(parse_protocol_kind("fig3").has_value());
}

TEST(protocols, ideal_reference) {
  auto same = ideal_qnd_reference(0.0, coherent(1.0, 2.0), coherent(-1.0, 0.5));
  EXPECT_EQ(same.cov(), vacuum(2).cov());
  EXPECT_EQ(same.mean(), (Vector<double>(4) << 1.0, 2.0, -1.0, 0.5).finished());
  auto one = ideal_qnd_reference(1.0, vacuum(1), vacuum(1));
  EXPECT_DOUBLE_EQ(one.variance(0, Quadrature::P), 1.0);
  EXPECT_DOUBLE_EQ(one.variance(1, Quadrature::X), 1.0);
  EXPECT_DOUBLE_EQ(one.variance(0, Quadrature::X), 0.5);
  EXPECT_DOUBLE_EQ(one.variance(1, Quadrature::P), 0.5);
}

TEST(protocols, every_kind_matches_hand_derived_model) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> gain(-2.5, 2.5), sq(0.0, 2.0), tr(0.3, 1.0);
  for (int k = 0; k < 200; ++k) {
    for (auto kind : kAllProtocolKinds) {
      auto c = make(kind, gain(rng), gain(rng), sq(rng), k % 3 ? tr(rng) : 1.0, 2 * sq(rng));
      c.idealize_resources = k % 4 == 0;
      c.input_a = random_physical_state(rng, 1);
      c.input_b = random_physical_state(rng, 1);
      auto res = run_protocol(c);
      auto lm = model_for(c);
      const double scale = std::max(1.0, stacked_cov(c).cwiseAbs().maxCoeff()) * std::exp(2 * c.squeezing) * 50;
      EXPECT_LT(max_abs_diff(res.output.cov(), lm.cov(stacked_cov(c))), 1e-12 * scale)
          << to_string(kind) << " case " << k;
      EXPECT_LT(max_abs_diff(res.output.mean(), lm.mean(stacked_mean(c))), 1e-12 * scale)
          << to_string(kind) << " case " << k;
      EXPECT_TRUE(res.noise_report.unchanged_rows_ok) << to_string(kind) << " case " << k;
      EXPECT_EQ(res.output.labels(), (std::vector<std::string>{"A", "B"}));
    }
  }
}

TEST(protocols, fig1_examples) {
  auto r0 = run_fig1(make(ProtocolKind::Fig1, 1, 1, 0));
  EXPECT_NEAR(r0.output.variance(0, Quadrature::P), 1.5, 1e-15);
  EXPECT_NEAR(r0.output.variance(1, Quadrature::X), 1.0, 1e-15);
  EXPECT_NEAR(r0.noise_report.added_var_pa(), 0.5, 1e-15);
  EXPECT_NEAR(r0.noise_report.added_var_xb(), 0.0, 1e-15);

  auto r5 = run_fig1(make(ProtocolKind::Fig1, 1, 1, 5));
  auto ideal = ideal_qnd_reference(1.0, vacuum(1), vacuum(1));
  EXPECT_LE(max_abs_diff(r5.output.cov(), ideal.cov()), 0.5 * std::exp(-10.0) + 1e-15);

  auto noisy = run_fig1(make(ProtocolKind::Fig1, 1, 1, 5, 0.8, 1.0));
  EXPECT_NEAR(noisy.noise_report.channel.pa, 0.36, 1e-12);
  EXPECT_NEAR(noisy.noise_report.channel.xb, 0.36, 1e-12);
  EXPECT_NEAR(noisy.noise_report.metric, 0.72, 1e-12);

  // The fed-forward channel noise is weighted by Bob's gain.
  auto half = make(ProtocolKind::Fig1, 0.5, 0.5, 5, 0.8, 1.0);
  half.idealize_resources = true;
  auto rh = run_fig1(half);
  EXPECT_NEAR(rh.noise_report.channel.pa, 0.25 * 0.36, 1e-12);
  EXPECT_NEAR(rh.noise_report.channel.xb, 0.25 * 0.36, 1e-12);
}

TEST(protocols, fig2_examples) {
  auto r0 = run_fig2(make(ProtocolKind::Fig2, 1, 1, 0));
  EXPECT_NEAR(r0.output.variance(0, Quadrature::P), 2.0, 1e-15);
  EXPECT_NEAR(r0.output.variance(1, Quadrature::X), 2.0, 1e-15);
  EXPECT_NEAR(r0.noise_report.added_var_pa(), 1.0, 1e-15);
  EXPECT_NEAR(r0.noise_report.added_var_xb(), 1.0, 1e-15);

  auto r5 = run_fig2(make(ProtocolKind::Fig2, 1, 1, 5));
  auto ideal = ideal_qnd_reference(1.0, vacuum(1), vacuum(1));
  EXPECT_LE(max_abs_diff(r5.output.cov(), ideal.cov()), 2 * 0.5 * std::exp(-10.0) + 1e-15);

  auto half = run_fig2(make(ProtocolKind::Fig2, 0.5, 0.5, 5, 0.8, 1.0));
  EXPECT_NEAR(half.noise_report.channel.pa, 0.09, 1e-12);
  EXPECT_NEAR(half.noise_report.channel.xb, 0.09, 1e-12);
  EXPECT_NEAR(half.noise_report.metric, 0.18, 1e-12);
}

TEST(protocols, classical_benchmark) {
  for (double g : {0.5, 1.0, 2.0}) {
    auto c = make(ProtocolKind::ClassicalBenchmark, g, g, 3.0);
    auto res = run_classical_benchmark(c);
    EXPECT_NEAR(res.noise_report.added_var_pa(), 2 * g * g * 0.5, 1e-12);
    EXPECT_NEAR(res.noise_report.added_var_xb(), 2 * g * g * 0.5, 1e-12);
  }
}

TEST(protocols, teleport_baseline) {
  auto lossless = run_teleport_baseline(make(ProtocolKind::TeleportBaseline, 1, 1, 0));
  // Each teleportation adds 2 V0 per quadrature; B crosses twice.
  EXPECT_NEAR(lossless.noise_report.total.xb, 2.0, 1e-14);
  EXPECT_NEAR(lossless.noise_report.total.pb, 2.0, 1e-14);
  EXPECT_NEAR(lossless.noise_report.total.pa, 1.0, 1e-14);
  EXPECT_NEAR(lossless.noise_report.total.xa, 0.0, 1e-14);

  auto noisy = run_teleport_baseline(make(ProtocolKind::TeleportBaseline, 1, 1, 5, 0.8, 1.0));
  EXPECT_NEAR(noisy.noise_report.channel.pb, 0.72, 1e-12);
  EXPECT_NEAR(noisy.noise_report.channel.pa, 0.36, 1e-12);
  EXPECT_NEAR(noisy.noise_report.channel.xb, 0.72, 1e-12);

  auto deep = run_teleport_baseline(make(ProtocolKind::TeleportBaseline, 1.5, 0.8, 12));
  EXPECT_LT(max_abs_diff(deep.output.cov(), ideal_qnd_reference(1.2, vacuum(1), vacuum(1)).cov()), 1e-9);
}

TEST(protocols, outputs_are_physical) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> gain(-3, 3), sq(0, 3), tr(0.2, 1.0);
  for (int k = 0; k < 100; ++k) {
    for (auto kind : kAllProtocolKinds) {
      auto c = make(kind, gain(rng), gain(rng), sq(rng), tr(rng));
      EXPECT_TRUE(check_physicality(run_protocol(c).output).physical) << to_string(kind) << " " << k;
    }
  }
}

TEST(protocols, transcript_records_operations) {
  auto res = run_fig1(make(ProtocolKind::Fig1, 1.0, 2.0, 1.0, 0.9));
  ASSERT_FALSE(res.transcript.empty());
  bool saw_measure = false, saw_channel = false;
  for (const auto& e : res.transcript) {
    saw_measure = saw_measure || e.operation.find("homodyne") != std::string::npos;
    saw_channel = saw_channel || e.operation.find("channel") != std::string::npos;
  }
  EXPECT_TRUE(saw_measure);
  EXPECT_TRUE(saw_channel);
}

TEST(protocols, config_validation) {
  auto c = make(ProtocolKind::Fig1, std::nan(""), 1, 0);
  EXPECT_THROW(run_protocol(c), std::invalid_argument);
  c = make(ProtocolKind::Fig2, 1, 1, -1);
  EXPECT_THROW(run_protocol(c), std::invalid_argument);
  c = make(ProtocolKind::Fig2, 1, 1, 0);
  c.input_a = vacuum(2);
  EXPECT_THROW(run_protocol(c), std::invalid_argument);
  c = make(ProtocolKind::Fig2, 1, 1, 0);
  c.kind = ProtocolKind::Fig1;
  EXPECT_THROW(run_fig2(c), std::invalid_argument);
  c.mode = TrajectoryMode{1, 1, 1};
  EXPECT_THROW(run_protocol(c), std::invalid_argument);
}

TEST(protocols, trajectory_mode_agrees_with_ensemble) {
  for (auto kind : kAllProtocolKinds) {
    auto c = make(kind, 1.0, 1.0, 1.0, 0.8);
    c.input_a = coherent(1.0, -0.5);
    auto ens = run_protocol(c);
    c.mode = TrajectoryMode{42, 100000, 2};
    auto traj = run_protocol(c);
    // Loose band: 1e5 runs.
    const double tol = 6 * std::sqrt(2.0 / 1e5) * ens.output.cov().cwiseAbs().maxCoeff();
    EXPECT_LT(max_abs_diff(traj.output.cov(), ens.output.cov()), tol) << to_string(kind);
    EXPECT_LT(max_abs_diff(traj.output.mean(), ens.output.mean()), tol) << to_string(kind);
  }
}

TEST(protocols, trajectory_mode_is_deterministic) {
  auto c = make(ProtocolKind::TeleportBaseline, 1.0, 1.0, 1.0, 0.8);
  c.mode = TrajectoryMode{3, 40000, 1};
  auto a = run_protocol(c);
  c.mode = TrajectoryMode{3, 40000, 4};
  auto b = run_protocol(c);
  EXPECT_EQ(a.output.cov(), b.output.cov());
  EXPECT_EQ(a.output.mean(), b.output.mean());
  c.mode = TrajectoryMode{4, 40000, 4};
  EXPECT_NE(run_protocol(c).output.cov(), a.output.cov());
}

TEST(protocols, conditional_trajectory_outcomes_reproducible) {
  auto circuit = build_circuit(make(ProtocolKind::Fig2, 1.0, 1.0, 0.5, 0.9));
  auto a = run_conditional_trajectories(circuit, 1000, 8);
  auto b = run_conditional_trajectories(circuit, 1000, 8, 3);
  EXPECT_EQ(a.first_run_outcomes, b.first_run_outcomes);
  EXPECT_EQ(a.first_run_outcomes.size(), 2u);
}

TEST(protocols, gain_split_noiseless_prefers_small_alice_gain) {
  const double g = 2.0, r = 1.0;
  auto split = optimize_gain_split(g, r, std::nullopt);
  EXPECT_NEAR(split.gain_alice, g * 1e-3, 1e-6 * g * 1e-3);
  EXPECT_NEAR(split.gain_alice * split.gain_bob, g, 1e-12);
  const double floor = split.gain_alice * split.gain_alice * 0.5 * std::exp(-2 * r);
  EXPECT_NEAR(split.added_noise, floor, 1e-11);
  double prev = -1;
  for (double ga = 0.1 * std::sqrt(g); ga <= 10 * std::sqrt(g); ga *= 1.2) {
    auto res = run_fig1(make(ProtocolKind::Fig1, ga, g / ga, r));
    const double total = res.noise_report.total.pa + res.noise_report.total.xb;
    EXPECT_GT(total, prev);
    prev = total;
  }
}

TEST(protocols, gain_split_with_channel_is_interior) {
  // Total added noise G_A^2 (V0 e^{-2r} + c) + (g / G_A)^2 c is minimized at
  // G_A^4 = g^2 c / (V0 e^{-2r} + c).
  const double g = 1.5, r = 1.0;
  const ChannelModel<double> ch(0.8, 1.0);
  const double c = 0.36, a = 0.5 * std::exp(-2 * r) + c;
  auto split = optimize_gain_split(g, r, ch);
  const double want = std::pow(g * g * c / a, 0.25);
  EXPECT_NEAR(split.gain_alice, want, 1e-5 * want);
  EXPECT_NEAR(split.added_noise, 2 * g * std::sqrt(a * c), 1e-10);
}

TEST(protocols, gain_split_symmetric_option) {
  GainSplitOptions opt;
  opt.symmetric = true;
  auto split = optimize_gain_split(4.0, 0.5, ChannelModel<double>(0.9), ProtocolKind::Fig1, opt);
  EXPECT_DOUBLE_EQ(split.gain_alice, 2.0);
  EXPECT_DOUBLE_EQ(split.gain_bob, 2.0);
  auto res = run_fig1([] {
    auto c = make(ProtocolKind::Fig1, 2.0, 2.0, 0.5);
    c.channel = ChannelModel<double>(0.9);
    return c;
  }());
  EXPECT_DOUBLE_EQ(split.added_noise, res.noise_report.total.pa + res.noise_report.total.xb);
  EXPECT_THROW(optimize_gain_split(-1.0, 0.0, std::nullopt), std::invalid_argument);
  EXPECT_THROW(optimize_gain_split(1.0, 0.0, std::nullopt, ProtocolKind::Fig2), std::invalid_argument);
}
