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

#include "cvqnd/circuit.h"

#include "cvqnd/moments.h"

#include <optional>

namespace cvqnd {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

template <typename Scalar>
GaussianState<Scalar> output_modes(const GaussianState<Scalar>& state, const Circuit& circuit) {
  return relabel(marginal(state, {state.index_of(circuit.output_a), state.index_of(circuit.output_b)}), {"A", "B"});
}

template <typename Scalar>
GaussianState<Scalar> prepare_all(const Circuit& circuit) {
  std::optional<GaussianState<Scalar>> state;
  bool preparing = true;
  for (const auto& step : circuit.steps) {
    const auto* prep = std::get_if<PrepareStep>(&step);
    if (prep == nullptr) {
      preparing = false;
      continue;
    }
    if (!preparing) throw std::invalid_argument("circuit prepares a mode after other steps");
    auto s = cast_state<Scalar>(prep->state);
    state = state ? tensor(*state, s) : s;
  }
  if (!state) throw std::invalid_argument("circuit prepares no modes");
  return *state;
}

template <typename Scalar>
GaussianState<Scalar> run_ensemble_in(const Circuit& circuit) {
  GaussianState<Scalar> state = prepare_all<Scalar>(circuit);
  for (const auto& step : circuit.steps) {
    std::visit(Overloaded{
                   [](const PrepareStep&) {},
                   [&](const GateStep& g) {
                     state = apply_on(state, SymplecticMap<Scalar>(g.map.matrix().template cast<Scalar>()), g.modes);
                   },
                   [&](const ChannelStep& c) {
                     const ChannelModel<Scalar> ch(Scalar(c.channel.transmitivity()), Scalar(c.channel.noise_var()));
                     state = apply_channel(state, ModeLabel::named(c.mode), ch);
                   },
                   [&](const MeasureStep& m) { state = ensemble_map(state, m.rule); },
               },
               step);
  }
  return output_modes(state, circuit);
}

}  // namespace

Circuit without_channels(const Circuit& circuit) {
  Circuit out;
  out.output_a = circuit.output_a;
  out.output_b = circuit.output_b;
  for (const auto& step : circuit.steps) {
    if (!std::holds_alternative<ChannelStep>(step)) out.steps.push_back(step);
  }
  return out;
}

std::vector<TranscriptEntry> transcript_of(const Circuit& circuit) {
  std::vector<TranscriptEntry> out;
  for (const auto& step : circuit.steps) {
    std::visit(Overloaded{
                   [&](const PrepareStep& p) {
                     out.push_back({"prepare", p.state.labels(), {}, {}});
                   },
                   [&](const GateStep& g) { out.push_back({g.name, g.modes, g.parameters, {}}); },
                   [&](const ChannelStep& c) {
                     out.push_back({"channel",
                                    {c.mode},
                                    {{"T", c.channel.transmitivity()}, {"noise_var", c.channel.noise_var()}},
                                    {}});
                   },
                   [&](const MeasureStep& m) {
                     TranscriptEntry e{std::string("homodyne_") + to_string(m.rule.source.axis) + " by " + m.party,
                                       {m.rule.source.mode.name},
                                       {},
                                       {}};
                     for (const auto& t : m.rule.terms) {
                       e.modes.push_back(t.target.mode.name);
                       e.parameters.emplace_back(std::string("gain->") + t.target.mode.name + "." +
                                                     to_string(t.target.axis),
                                                 t.gain);
                     }
                     out.push_back(std::move(e));
                   },
               },
               step);
  }
  return out;
}

GaussianState<double> run_ensemble(const Circuit& circuit) {
  return cast_state<double>(run_ensemble_in<long double>(circuit));
}

namespace {

/// One trajectory. `measure(state, selector)` returns a homodyne result and the
/// state conditioned on it. `maps` caches the embedded gate matrices, whose
/// layout is the same in every run.
template <typename MeasureFn>
GaussianState<double> replay(const Circuit& circuit, const GaussianState<double>& initial,
                             std::vector<std::optional<SymplecticMap<double>>>& maps, MeasureFn&& measure) {
  GaussianState<double> state = initial;
  for (size_t i = 0; i < circuit.steps.size(); ++i) {
    const auto& step = circuit.steps[i];
    if (const auto* g = std::get_if<GateStep>(&step)) {
      if (!maps[i]) {
        std::vector<Index> targets;
        for (const auto& name : g->modes) targets.push_back(state.index_of(name));
        maps[i] = embed(g->map, std::span<const Index>(targets), state.n_modes());
      }
      state = apply(state, *maps[i]);
    } else if (const auto* c = std::get_if<ChannelStep>(&step)) {
      state = apply_channel(state, ModeLabel::named(c->mode), c->channel);
    } else if (const auto* m = std::get_if<MeasureStep>(&step)) {
      auto [outcome, conditioned] = measure(state, m->rule.source);
      state = feedforward_displace(conditioned, m->rule, outcome);
    }
  }
  return output_modes(state, circuit);
}

}  // namespace

ConditionalTrajectories run_conditional_trajectories(const Circuit& circuit, size_t n_runs, uint64_t seed,
                                                     unsigned workers) {
  if (n_runs < 2) throw std::invalid_argument("trajectory mode needs at least two runs");
  const GaussianState<double> initial = prepare_all<double>(circuit);

  // The conditional covariance does not depend on the outcomes; fix it with a
  // pass that reports every quadrature at its mean.
  std::vector<std::optional<SymplecticMap<double>>> maps(circuit.steps.size());
  const GaussianState<double> at_mean =
      replay(circuit, initial, maps, [](const GaussianState<double>& s, const QuadratureSelector& sel) {
        const double mean = s.mean()(quadrature_index(resolve(s, sel.mode), sel.axis));
        return std::make_pair(HomodyneOutcome{mean}, condition_on_outcome(s, sel, mean));
      });

  std::vector<double> first_outcomes;
  const MomentAccumulator acc = chunked_moments(
      n_runs, seed, /*stream_id=*/1, workers, 4,
      [&](size_t chunk, size_t begin, size_t end, std::mt19937_64& rng, MomentAccumulator& out) {
        auto local_maps = maps;
        for (size_t run = begin; run < end; ++run) {
          std::vector<double> outcomes;
          const auto final_state = replay(
              circuit, initial, local_maps, [&](const GaussianState<double>& s, const QuadratureSelector& sel) {
                auto result = sample_outcome(s, sel, rng);
                outcomes.push_back(result.first.value);
                return result;
              });
          if (chunk == 0 && run == 0) first_outcomes = outcomes;
          out.add(final_state.mean());
        }
      });
  GaussianState<double> output(acc.mean(), acc.covariance() + at_mean.cov(), {"A", "B"});
  return {std::move(output), std::move(first_outcomes)};
}

}  // namespace cvqnd
