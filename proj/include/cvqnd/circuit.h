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

#ifndef CVQND_CIRCUIT_H
#define CVQND_CIRCUIT_H

#include "cvqnd/channels.h"
#include "cvqnd/measurement.h"
#include "cvqnd/symplectic.h"

#include <cstdint>
#include <variant>

namespace cvqnd {

/// A protocol as an ordered list of steps over named modes. All modes are
/// introduced by PrepareSteps, which precede every other step.
struct PrepareStep {
  /// Labelled. Kept in extended precision so that strongly squeezed
  /// resources survive the cancellations downstream.
  GaussianState<long double> state;
};

struct GateStep {
  std::string name;
  SymplecticMap<double> map;
  std::vector<std::string> modes;
  std::vector<std::pair<std::string, double>> parameters;
};

struct ChannelStep {
  std::string mode;
  ChannelModel<double> channel;
};

/// Homodyne detection with feedforward; source and targets are named.
struct MeasureStep {
  std::string party;
  FeedforwardRule rule;
};

using CircuitStep = std::variant<PrepareStep, GateStep, ChannelStep, MeasureStep>;

struct Circuit {
  std::vector<CircuitStep> steps;
  /// Modes reported as (A, B) at the end.
  std::string output_a = "A";
  std::string output_b = "B";
};

/// Same circuit with every ChannelStep dropped.
Circuit without_channels(const Circuit& circuit);

/// One transcript line per step.
struct TranscriptEntry {
  std::string operation;
  std::vector<std::string> modes;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<double> outcomes;
};

std::vector<TranscriptEntry> transcript_of(const Circuit& circuit);

/// Outcome-averaged output over (A, B), computed in extended precision.
GaussianState<double> run_ensemble(const Circuit& circuit);

struct ConditionalTrajectories {
  /// Moments over (A, B): law of total variance across runs.
  GaussianState<double> output;
  /// Homodyne outcomes of run 0, in step order.
  std::vector<double> first_run_outcomes;
};

/// Per run, samples each homodyne result from the current conditional state
/// and applies the feedforward; chunked streams make the result independent
/// of `workers`.
ConditionalTrajectories run_conditional_trajectories(const Circuit& circuit, size_t n_runs, uint64_t seed,
                                                     unsigned workers = 1);

}  // namespace cvqnd

#endif  // CVQND_CIRCUIT_H
