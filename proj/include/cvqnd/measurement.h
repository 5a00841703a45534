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

#ifndef CVQND_MEASUREMENT_H
#define CVQND_MEASUREMENT_H

#include "cvqnd/phase_space.h"

#include <random>

namespace cvqnd {

inline constexpr double kDegenerateMeasurementVariance = 1e-12;

/// Thrown when the measured quadrature has (numerically) zero variance.
class DegenerateMeasurement : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Refers to a mode by name, or by position when the name is empty.
struct ModeLabel {
  std::string name;
  Index index = -1;

  static ModeLabel named(std::string n) { return {std::move(n), -1}; }
  static ModeLabel at(Index i) { return {{}, i}; }
};

template <typename Scalar>
Index resolve(const GaussianState<Scalar>& state, const ModeLabel& mode) {
  if (!mode.name.empty()) return state.index_of(mode.name);
  if (mode.index < 0 || mode.index >= state.n_modes()) throw std::invalid_argument("mode index out of range");
  return mode.index;
}

struct QuadratureSelector {
  ModeLabel mode;
  Quadrature axis = Quadrature::X;
};

struct HomodyneOutcome {
  double value = 0;
};

struct FeedforwardTerm {
  QuadratureSelector target;
  double gain = 0;
};

/// Measure `source`, then displace each target quadrature by gain * outcome.
///
/// Index-based targets refer to positions in the register before the measured
/// mode is removed; named targets are looked up wherever they end up. Mixing
/// an index-based target with a named source is rejected where the
/// pre-measurement position cannot be recovered.
struct FeedforwardRule {
  QuadratureSelector source;
  std::vector<FeedforwardTerm> terms;
};

namespace detail {

struct MeasurementSplit {
  Index measured_mode;
  Index measured_row;
  std::vector<Index> kept_rows;
  std::vector<std::string> kept_labels;
};

template <typename Scalar>
MeasurementSplit split_for_measurement(const GaussianState<Scalar>& state, const QuadratureSelector& sel) {
  if (state.n_modes() < 2) throw std::invalid_argument("measurement needs at least two modes");
  MeasurementSplit split;
  split.measured_mode = resolve(state, sel.mode);
  split.measured_row = quadrature_index(split.measured_mode, sel.axis);
  for (Index m = 0; m < state.n_modes(); ++m) {
    if (m == split.measured_mode) continue;
    split.kept_rows.push_back(2 * m);
    split.kept_rows.push_back(2 * m + 1);
    split.kept_labels.push_back(state.labels()[static_cast<size_t>(m)]);
  }
  const Scalar var = state.cov()(split.measured_row, split.measured_row);
  if (var <= Scalar(kDegenerateMeasurementVariance)) {
    throw DegenerateMeasurement("measured quadrature has vanishing variance");
  }
  return split;
}

/// Row of the kept register that a feedforward target points at.
template <typename Scalar>
Index target_row(const GaussianState<Scalar>& before, const MeasurementSplit& split, const QuadratureSelector& t) {
  const Index mode = resolve(before, t.mode);
  if (mode == split.measured_mode) throw std::invalid_argument("feedforward target is the measured mode");
  const Index kept_mode = mode < split.measured_mode ? mode : mode - 1;
  return quadrature_index(kept_mode, t.axis);
}

}  // namespace detail

/// Gaussian conditioning on a homodyne result (Schur complement); the
/// measured mode is removed and later modes shift down by one.
template <typename Scalar>
GaussianState<Scalar> condition_on_outcome(const GaussianState<Scalar>& state, const QuadratureSelector& sel,
                                           Scalar outcome) {
  const auto split = detail::split_for_measurement(state, sel);
  const Index k = static_cast<Index>(split.kept_rows.size());
  const Index m = split.measured_row;
  const Scalar var = state.cov()(m, m);
  Vector<Scalar> cross(k);
  Vector<Scalar> mean(k);
  Matrix<Scalar> cov(k, k);
  for (Index i = 0; i < k; ++i) {
    cross(i) = state.cov()(split.kept_rows[i], m);
    mean(i) = state.mean()(split.kept_rows[i]);
    for (Index j = 0; j < k; ++j) cov(i, j) = state.cov()(split.kept_rows[i], split.kept_rows[j]);
  }
  mean += cross * ((outcome - state.mean()(m)) / var);
  cov -= cross * cross.transpose() / var;
  return GaussianState<Scalar>(std::move(mean), std::move(cov), split.kept_labels);
}

/// Draws a homodyne result from the marginal of the measured quadrature and
/// returns it with the conditioned state.
template <typename Scalar, typename Rng>
std::pair<HomodyneOutcome, GaussianState<Scalar>> sample_outcome(const GaussianState<Scalar>& state,
                                                                 const QuadratureSelector& sel, Rng& rng) {
  using std::sqrt;
  const Index row = quadrature_index(resolve(state, sel.mode), sel.axis);
  const double mu = static_cast<double>(state.mean()(row));
  const double sigma = std::sqrt(static_cast<double>(state.cov()(row, row)));
  std::normal_distribution<double> dist(mu, sigma > 0 ? sigma : 1.0);
  HomodyneOutcome outcome{dist(rng)};
  return {outcome, condition_on_outcome(state, sel, Scalar(outcome.value))};
}

/// Shifts every target quadrature by gain * outcome. `state` is the
/// post-measurement register (measured mode already removed).
template <typename Scalar>
GaussianState<Scalar> feedforward_displace(const GaussianState<Scalar>& state, const FeedforwardRule& rule,
                                           HomodyneOutcome outcome) {
  Vector<Scalar> mean = state.mean();
  for (const auto& term : rule.terms) {
    if (!std::isfinite(term.gain)) throw std::invalid_argument("feedforward gain must be finite");
    ModeLabel target = term.target.mode;
    if (target.name.empty()) {
      const ModeLabel& src = rule.source.mode;
      if (!src.name.empty()) throw std::invalid_argument("index-based feedforward target needs an index-based source");
      if (target.index == src.index) throw std::invalid_argument("feedforward target is the measured mode");
      if (target.index > src.index) --target.index;
    }
    mean(quadrature_index(resolve(state, target), term.target.axis)) += Scalar(term.gain * outcome.value);
  }
  return GaussianState<Scalar>(std::move(mean), state.cov(), state.labels());
}

/// Outcome-averaged measure-then-displace. With y_R the kept quadratures, y_m
/// the measured one and c the gain vector, the averaged map is the linear
/// substitution y_R -> y_R + c y_m followed by discarding the measured mode.
template <typename Scalar>
GaussianState<Scalar> ensemble_map(const GaussianState<Scalar>& state, const FeedforwardRule& rule) {
  const auto split = detail::split_for_measurement(state, rule.source);
  const Index k = static_cast<Index>(split.kept_rows.size());
  Vector<Scalar> gains = Vector<Scalar>::Zero(k);
  for (const auto& term : rule.terms) {
    if (!std::isfinite(term.gain)) throw std::invalid_argument("feedforward gain must be finite");
    gains(detail::target_row(state, split, term.target)) += Scalar(term.gain);
  }
  // L = [I_k | c] acting on (kept rows, measured row).
  Matrix<Scalar> lift = Matrix<Scalar>::Zero(k, state.mean().size());
  for (Index i = 0; i < k; ++i) {
    lift(i, split.kept_rows[i]) = Scalar(1);
    lift(i, split.measured_row) = gains(i);
  }
  return GaussianState<Scalar>(lift * state.mean(), lift * state.cov() * lift.transpose(), split.kept_labels);
}

}  // namespace cvqnd

#endif  // CVQND_MEASUREMENT_H
