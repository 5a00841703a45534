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

#include "cvqnd/resource_states.h"

#include <numbers>

namespace cvqnd {

std::string_view to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::Fig1:
      return "fig1";
    case ProtocolKind::Fig2:
      return "fig2";
    case ProtocolKind::TeleportBaseline:
      return "teleport";
    case ProtocolKind::ClassicalBenchmark:
      return "classical";
    case ProtocolKind::IdealQND:
      return "ideal";
  }
  return "unknown";
}

std::optional<ProtocolKind> parse_protocol_kind(std::string_view name) {
  for (ProtocolKind k : kAllProtocolKinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

void ProtocolConfig::validate() const {
  if (!std::isfinite(gain_alice) || !std::isfinite(gain_bob)) throw std::invalid_argument("gains must be finite");
  if (!std::isfinite(squeezing) || squeezing < 0) throw std::invalid_argument("squeezing must be finite and >= 0");
  for (const auto* in : {&input_a, &input_b}) {
    if (in->n_modes() != 1) throw std::invalid_argument("protocol inputs must be single-mode states");
    if (!check_physicality(*in).physical) throw std::invalid_argument("protocol inputs must be physical");
  }
  if (const auto* t = std::get_if<TrajectoryMode>(&mode); t && t->n_runs < 2) {
    throw std::invalid_argument("trajectory mode needs at least two runs");
  }
}

GaussianState<double> ideal_qnd_reference(double g, const GaussianState<double>& input_a,
                                          const GaussianState<double>& input_b) {
  return relabel(apply(tensor(input_a, input_b), qnd_coupling(g)), {"A", "B"});
}

namespace {

QuadratureSelector quad(const std::string& mode, Quadrature q) { return {ModeLabel::named(mode), q}; }

PrepareStep prepare(const GaussianState<long double>& state, std::vector<std::string> names) {
  return {relabel(state, std::move(names))};
}

PrepareStep prepare(const GaussianState<double>& state, std::vector<std::string> names) {
  return prepare(cast_state<long double>(state), std::move(names));
}

GateStep qnd_step(double g, std::string a_role, std::string b_role) {
  return {"qnd_coupling", qnd_coupling(g), {std::move(a_role), std::move(b_role)}, {{"g", g}}};
}

GaussianState<long double> epr_resource(const ProtocolConfig& c) {
  return c.idealize_resources ? ideal_epr_resource<long double>() : epr_pair<long double>(c.squeezing);
}

void fig1_steps(const ProtocolConfig& c, Circuit& out) {
  const auto resource = c.idealize_resources ? ideal_p_squeezed_resource<long double>()
                                              : squeezed_vacuum<long double>(c.squeezing, SqueezeAxis::P);
  out.steps.push_back(prepare(resource, {"C"}));
  out.steps.push_back(GateStep{"qnd_sign_flipped", qnd_sign_flipped(c.gain_bob), {"B", "C"}, {{"G", c.gain_bob}}});
  if (c.channel) out.steps.push_back(ChannelStep{"C", *c.channel});
  out.steps.push_back(qnd_step(c.gain_alice, "A", "C"));
  out.steps.push_back(MeasureStep{"Alice", {quad("C", Quadrature::X), {{quad("B", Quadrature::X), c.gain_bob}}}});
}

/// Shared by Fig2 and the classical benchmark; the pair source is at Bob, so
/// mode One crosses the channel to Alice.
void fig2_steps(const ProtocolConfig& c, const GaussianState<long double>& pair, Circuit& out) {
  out.steps.push_back(prepare(pair, {"One", "Two"}));
  if (c.channel) out.steps.push_back(ChannelStep{"One", *c.channel});
  out.steps.push_back(qnd_step(c.gain_alice, "A", "One"));
  out.steps.push_back(qnd_step(c.gain_bob, "Two", "B"));
  out.steps.push_back(MeasureStep{"Alice", {quad("One", Quadrature::X), {{quad("B", Quadrature::X), c.gain_bob}}}});
  out.steps.push_back(MeasureStep{"Bob", {quad("Two", Quadrature::P), {{quad("A", Quadrature::P), c.gain_alice}}}});
}

/// Unit-gain teleportation of `input` onto `rx` using the pair (rx, tx); rx
/// crosses the channel. The Bell measurement mixes input with tx, reads X on
/// the sum port and P on the difference port, leaving
/// rx = input + (X_rx + X_tx, P_rx - P_tx) + channel noise.
void teleport_steps(const ProtocolConfig& c, const std::string& input, const std::string& rx, const std::string& tx,
                    const std::string& sender, Circuit& out) {
  const double root2 = std::numbers::sqrt2;
  if (c.channel) out.steps.push_back(ChannelStep{rx, *c.channel});
  out.steps.push_back(GateStep{"balanced_beam_splitter", balanced_beam_splitter(), {input, tx}, {}});
  out.steps.push_back(MeasureStep{sender, {quad(input, Quadrature::X), {{quad(rx, Quadrature::X), root2}}}});
  out.steps.push_back(MeasureStep{sender, {quad(tx, Quadrature::P), {{quad(rx, Quadrature::P), root2}}}});
}

void teleport_baseline_steps(const ProtocolConfig& c, Circuit& out) {
  out.steps.push_back(prepare(epr_resource(c), {"T1rx", "T1tx"}));
  out.steps.push_back(prepare(epr_resource(c), {"T2rx", "T2tx"}));
  teleport_steps(c, "B", "T1rx", "T1tx", "Bob", out);
  out.steps.push_back(qnd_step(c.target_gain(), "A", "T1rx"));
  teleport_steps(c, "T1rx", "T2rx", "T2tx", "Alice", out);
  out.output_b = "T2rx";
}

bool rows_match(const GaussianState<double>& a, const GaussianState<double>& b, Index row) {
  constexpr double tol = 1e-12;
  if (std::abs(a.mean()(row) - b.mean()(row)) > tol) return false;
  return (a.cov().row(row) - b.cov().row(row)).cwiseAbs().maxCoeff() <= tol;
}

QuadratureNoise diagonal_excess(const GaussianState<double>& out, const GaussianState<double>& ref) {
  const Vector<double> d = out.cov().diagonal() - ref.cov().diagonal();
  return {d(0), d(1), d(2), d(3)};
}

ProtocolResult run_checked(const ProtocolConfig& config, ProtocolKind expected) {
  if (config.kind != expected) throw std::invalid_argument("protocol kind does not match the runner");
  return run_protocol(config);
}

}  // namespace

Circuit build_circuit(const ProtocolConfig& config) {
  config.validate();
  Circuit out;
  out.steps.push_back(prepare(config.input_a, {"A"}));
  out.steps.push_back(prepare(config.input_b, {"B"}));
  switch (config.kind) {
    case ProtocolKind::Fig1:
      fig1_steps(config, out);
      break;
    case ProtocolKind::Fig2:
      fig2_steps(config, epr_resource(config), out);
      break;
    case ProtocolKind::ClassicalBenchmark:
      fig2_steps(config, vacuum<long double>(2), out);
      break;
    case ProtocolKind::TeleportBaseline:
      teleport_baseline_steps(config, out);
      break;
    case ProtocolKind::IdealQND:
      out.steps.push_back(qnd_step(config.target_gain(), "A", "B"));
      break;
  }
  return out;
}

NoiseReport added_noise_report(const GaussianState<double>& output, const GaussianState<double>& ideal,
                               const GaussianState<double>& resource_only, ProtocolKind kind) {
  if (output.n_modes() != 2 || ideal.n_modes() != 2 || resource_only.n_modes() != 2) {
    throw std::invalid_argument("noise report needs two-mode (A, B) states");
  }
  NoiseReport r;
  r.total = diagonal_excess(output, ideal);
  r.resource = diagonal_excess(resource_only, ideal);
  r.channel = {r.total.xa - r.resource.xa, r.total.pa - r.resource.pa, r.total.xb - r.resource.xb,
               r.total.pb - r.resource.pb};
  r.metric = r.channel.pa + r.channel.xb;
  r.unchanged_rows_ok = rows_match(output, ideal, 0);
  if (kind != ProtocolKind::TeleportBaseline) r.unchanged_rows_ok = r.unchanged_rows_ok && rows_match(output, ideal, 3);
  return r;
}

ProtocolResult run_protocol(const ProtocolConfig& config) {
  ProtocolConfig effective = config;
  if (effective.kind == ProtocolKind::ClassicalBenchmark) {
    effective.squeezing = 0;
    effective.idealize_resources = false;
  }
  const Circuit circuit = build_circuit(effective);
  const Circuit bare = without_channels(circuit);
  const auto ideal = ideal_qnd_reference(effective.target_gain(), effective.input_a, effective.input_b);

  auto transcript = transcript_of(circuit);
  std::optional<GaussianState<double>> output, resource_only;
  if (const auto* t = std::get_if<TrajectoryMode>(&effective.mode)) {
    auto traj = run_conditional_trajectories(circuit, t->n_runs, t->seed, t->workers);
    // Same seed for the channel-free run keeps the decomposition correlated.
    resource_only = run_conditional_trajectories(bare, t->n_runs, t->seed, t->workers).output;
    output = std::move(traj.output);
    size_t k = 0;
    for (size_t i = 0; i < circuit.steps.size(); ++i) {
      if (std::holds_alternative<MeasureStep>(circuit.steps[i]) && k < traj.first_run_outcomes.size()) {
        transcript[i].outcomes.push_back(traj.first_run_outcomes[k++]);
      }
    }
  } else {
    output = run_ensemble(circuit);
    resource_only = run_ensemble(bare);
  }
  NoiseReport report = added_noise_report(*output, ideal, *resource_only, effective.kind);
  return {std::move(*output), std::move(*resource_only), report, std::move(transcript)};
}

ProtocolResult run_fig1(const ProtocolConfig& config) { return run_checked(config, ProtocolKind::Fig1); }
ProtocolResult run_fig2(const ProtocolConfig& config) { return run_checked(config, ProtocolKind::Fig2); }
ProtocolResult run_classical_benchmark(const ProtocolConfig& config) {
  return run_checked(config, ProtocolKind::ClassicalBenchmark);
}
ProtocolResult run_teleport_baseline(const ProtocolConfig& config) {
  return run_checked(config, ProtocolKind::TeleportBaseline);
}

GainSplit optimize_gain_split(double g, double squeezing, const std::optional<ChannelModel<double>>& channel,
                              ProtocolKind kind, const GainSplitOptions& options) {
  if (!(g > 0) || !std::isfinite(g)) throw std::invalid_argument("target gain must be positive");
  if (kind != ProtocolKind::Fig1) throw std::invalid_argument("gain split is defined for fig1 only");
  if (!(options.lower_factor > 0) || !(options.upper_factor >= options.lower_factor)) {
    throw std::invalid_argument("invalid gain search interval");
  }
  ProtocolConfig config;
  config.kind = kind;
  config.squeezing = squeezing;
  config.channel = channel;
  config.idealize_resources = options.idealize_resources;
  auto noise_at = [&](double log_ga) {
    config.gain_alice = std::exp(log_ga);
    config.gain_bob = g / config.gain_alice;
    const auto r = run_fig1(config).noise_report;
    return r.total.pa + r.total.xb;
  };

  if (options.symmetric) {
    const double root = std::sqrt(g);
    return {root, root, noise_at(std::log(root))};
  }

  double lo = std::log(g * options.lower_factor), hi = std::log(g * options.upper_factor);
  const double tol = std::log1p(options.relative_tolerance);
  const double inv_phi = (std::sqrt(5.0) - 1) / 2;
  double a = hi - inv_phi * (hi - lo), b = lo + inv_phi * (hi - lo);
  double fa = noise_at(a), fb = noise_at(b);
  while (hi - lo > tol) {
    if (fa <= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = noise_at(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = noise_at(b);
    }
  }
  std::pair<double, double> best{0.5 * (lo + hi), noise_at(0.5 * (lo + hi))};
  for (double edge : {std::log(g * options.lower_factor), std::log(g * options.upper_factor)}) {
    const double f = noise_at(edge);
    if (f <= best.second) best = {edge, f};
  }
  const double ga = std::exp(best.first);
  return {ga, g / ga, best.second};
}

}  // namespace cvqnd
