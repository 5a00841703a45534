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

#ifndef CVQND_PROTOCOLS_H
#define CVQND_PROTOCOLS_H

#include "cvqnd/circuit.h"

#include <optional>
#include <string_view>

namespace cvqnd {

/// The ways of realizing a QND coupling between Alice's mode A and Bob's mode B.
enum class ProtocolKind {
  /// Bob couples an auxiliary squeezed mode C, sends it to Alice through one
  /// quantum channel; Alice couples it, measures X_C, Bob displaces X_B.
  Fig1,
  /// Shared EPR pair, local couplings on both sides, two homodynes and
  /// two-way classical feedforward.
  Fig2,
  /// Bob teleports B to Alice, Alice couples locally, Alice teleports back.
  TeleportBaseline,
  /// Fig2 wiring with the EPR pair replaced by two vacua.
  ClassicalBenchmark,
  /// Direct local coupling with gain G_A * G_B.
  IdealQND,
};

std::string_view to_string(ProtocolKind kind);
std::optional<ProtocolKind> parse_protocol_kind(std::string_view name);
inline constexpr ProtocolKind kAllProtocolKinds[] = {ProtocolKind::Fig1, ProtocolKind::Fig2,
                                                     ProtocolKind::TeleportBaseline, ProtocolKind::ClassicalBenchmark,
                                                     ProtocolKind::IdealQND};

struct EnsembleMode {};
struct TrajectoryMode {
  uint64_t seed = 0;
  size_t n_runs = 100000;
  unsigned workers = 1;
};
using RunMode = std::variant<EnsembleMode, TrajectoryMode>;

struct ProtocolConfig {
  ProtocolKind kind = ProtocolKind::Fig1;
  double gain_alice = 1.0;
  double gain_bob = 1.0;
  /// Squeezing of the mode-C resource or of each EPR pair.
  double squeezing = 0.0;
  std::optional<ChannelModel<double>> channel;
  /// Replace resources by their infinite-squeezing limits, so that only
  /// channel noise remains. Ignored by ClassicalBenchmark.
  bool idealize_resources = false;
  GaussianState<double> input_a = vacuum(1);
  GaussianState<double> input_b = vacuum(1);
  RunMode mode = EnsembleMode{};

  double target_gain() const { return gain_alice * gain_bob; }
  /// Throws std::invalid_argument on non-finite gains, negative squeezing or
  /// non-physical, non-single-mode inputs.
  void validate() const;
};

/// Added variance per output quadrature relative to the ideal coupling.
struct QuadratureNoise {
  double xa = 0, pa = 0, xb = 0, pb = 0;

  double sum() const { return xa + pa + xb + pb; }
};

/// Excess output variance over the ideal coupling, split into the part
/// present without the channel (resource) and the rest (channel).
struct NoiseReport {
  QuadratureNoise total;
  QuadratureNoise resource;
  QuadratureNoise channel;
  /// channel.pa + channel.xb
  double metric = 0;
  /// Output rows X_A and P_B (means and covariances) agree with the ideal
  /// coupling within 1e-12. TeleportBaseline corrupts P_B, so only X_A is
  /// checked there.
  bool unchanged_rows_ok = true;

  double added_var_pa() const { return total.pa; }
  double added_var_xb() const { return total.xb; }
};

struct ProtocolResult {
  /// Output over (A, B).
  GaussianState<double> output;
  /// Output of the same protocol with the channel removed.
  GaussianState<double> resource_only;
  NoiseReport noise_report;
  std::vector<TranscriptEntry> transcript;
};

/// qnd_coupling(g) applied to input_a (x) input_b.
GaussianState<double> ideal_qnd_reference(double g, const GaussianState<double>& input_a,
                                          const GaussianState<double>& input_b);

/// Step list of the configured protocol; mode names are A, B and C,
/// One/Two for the EPR pair, T1rx/T1tx/T2rx/T2tx for the teleportations.
Circuit build_circuit(const ProtocolConfig& config);

/// Noise decomposition of `output` against `ideal`; `resource_only` is the
/// same protocol run without its channel.
NoiseReport added_noise_report(const GaussianState<double>& output, const GaussianState<double>& ideal,
                               const GaussianState<double>& resource_only, ProtocolKind kind);

ProtocolResult run_fig1(const ProtocolConfig& config);
ProtocolResult run_fig2(const ProtocolConfig& config);
ProtocolResult run_classical_benchmark(const ProtocolConfig& config);
ProtocolResult run_teleport_baseline(const ProtocolConfig& config);
/// Dispatches on config.kind.
ProtocolResult run_protocol(const ProtocolConfig& config);

struct GainSplit {
  double gain_alice;
  double gain_bob;
  /// Total added variance Var_add(P'_A) + Var_add(X'_B) at the optimum.
  double added_noise;
};

struct GainSplitOptions {
  /// G_A is searched over [lower_factor * g, upper_factor * g].
  double lower_factor = 1e-3;
  double upper_factor = 1e3;
  /// Force G_A = G_B = sqrt(g).
  bool symmetric = false;
  bool idealize_resources = false;
  double relative_tolerance = 1e-6;
};

/// Minimizes Fig. 1's total added noise over G_A with G_A * G_B = g fixed
/// (golden-section search in log G_A, endpoints included).
GainSplit optimize_gain_split(double g, double squeezing, const std::optional<ChannelModel<double>>& channel,
                              ProtocolKind kind = ProtocolKind::Fig1, const GainSplitOptions& options = {});

}  // namespace cvqnd

#endif  // CVQND_PROTOCOLS_H
