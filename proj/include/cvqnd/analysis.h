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

#ifndef CVQND_ANALYSIS_H
#define CVQND_ANALYSIS_H

#include "cvqnd/protocols.h"

#include <iosfwd>
#include <map>

namespace cvqnd {

/// Unit-weight Duan sum for a two-mode state. Both sign conventions are
/// separability witnesses (they differ by a local phase flip of mode B); the
/// smaller one is reported.
struct DuanReport {
  /// Var(X_A + X_B) + Var(P_A - P_B)
  double plus_value = 0;
  /// Var(X_A - X_B) + Var(P_A + P_B)
  double minus_value = 0;
  double value = 0;
  double bound = 4 * kVacuumVariance;
  bool entangled = false;
};

DuanReport duan_criterion(const GaussianState<double>& state);

/// Noise report for a finished run against an arbitrary reference.
NoiseReport added_noise_report(const ProtocolResult& result, const GaussianState<double>& ideal,
                               ProtocolKind kind);

/// channel.pa + channel.xb
double channel_noise_metric(const NoiseReport& report);

struct ComparisonRow {
  std::string protocol;
  double gain_alice = 0, gain_bob = 0, squeezing = 0, transmitivity = 1, noise_var = 0;
  double var_add_pa = 0, var_add_xb = 0;
  double resource_pa = 0, resource_xb = 0;
  double channel_pa = 0, channel_xb = 0;
  double metric = 0;
  double duan_value = 0, duan_bound = 0;
};

inline constexpr const char* kCsvHeader =
    "protocol,G_A,G_B,r,T,noise_var,var_add_PA,var_add_XB,resource_PA,resource_XB,channel_PA,channel_XB,metric,"
    "duan_value,duan_bound";

ComparisonRow comparison_row(const ProtocolConfig& config, const ProtocolResult& result);
/// %.17g for every number.
std::string to_csv(const ComparisonRow& row);
void write_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

struct SweepSpec {
  std::vector<ProtocolKind> protocols;
  /// Symmetric gains G_A = G_B = G; ignored when gain_alice / gain_bob are set.
  std::vector<double> gains;
  std::vector<double> gains_alice;
  std::vector<double> gains_bob;
  std::vector<double> squeezings{0.0};
  /// T = 1 means no channel.
  std::vector<double> transmitivities{1.0};
  std::vector<double> noise_vars{2 * kVacuumVariance};
  bool idealize_resources = false;
  RunMode mode = EnsembleMode{};

  /// Throws std::invalid_argument on empty grids or out-of-range values.
  void validate() const;
  /// Grid in protocol-major, then gain, squeezing, T, noise_var order.
  std::vector<ProtocolConfig> expand() const;
};

/// Evaluates every grid point on up to `workers` threads; rows come back in
/// grid order.
std::vector<ComparisonRow> run_sweep(const SweepSpec& spec, unsigned workers = 1);

struct CrossingCheck {
  double gain;
  double metric_fig1;
  double metric_fig2;
};

/// Channel metrics of Fig1 and Fig2 at symmetric gain, idealized resources.
CrossingCheck crossing_at(double gain, double transmitivity, double noise_var);

/// `key = value` lines; `#` starts a comment; blank lines ignored.
std::map<std::string, std::string> parse_key_value(std::istream& in);
/// Comma-separated reals; empty string gives an empty list.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace cvqnd

#endif  // CVQND_ANALYSIS_H
