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

#ifndef CVQND_CHANNELS_H
#define CVQND_CHANNELS_H

#include "cvqnd/measurement.h"
#include "cvqnd/phase_space.h"

namespace cvqnd {

/// Lossy channel with transmitivity T preceded by an amplifier of gain 1/T.
///
/// Acts as X -> X + sqrt(1 - T^2) Xn, P -> P + sqrt(1 - T^2) Pn with zero-mean
/// noise of variance noise_var per quadrature. The default noise_var = 2 V0 is
/// vacuum loss plus the amplifier's idler contribution.
template <typename Scalar = double>
class ChannelModel {
 public:
  explicit ChannelModel(Scalar transmitivity, Scalar noise_var = Scalar(2) * vacuum_variance<Scalar>)
      : transmitivity_(transmitivity), noise_var_(noise_var) {
    if (!(transmitivity_ > Scalar(0) && transmitivity_ <= Scalar(1))) {
      throw std::invalid_argument("channel transmitivity must lie in (0, 1]");
    }
    if (!(noise_var_ >= Scalar(0)) || !std::isfinite(static_cast<double>(noise_var_))) {
      throw std::invalid_argument("channel noise variance must be finite and non-negative");
    }
  }

  Scalar transmitivity() const { return transmitivity_; }
  Scalar noise_var() const { return noise_var_; }

 private:
  Scalar transmitivity_;
  Scalar noise_var_;
};

/// Variance added to each quadrature: (1 - T^2) noise_var.
template <typename Scalar>
Scalar added_noise_of(const ChannelModel<Scalar>& ch) {
  const Scalar t = ch.transmitivity();
  return (Scalar(1) - t * t) * ch.noise_var();
}

template <typename Scalar>
GaussianState<Scalar> apply_channel(const GaussianState<Scalar>& state, const ModeLabel& mode,
                                    const ChannelModel<Scalar>& ch) {
  const Index m = resolve(state, mode);
  Matrix<Scalar> cov = state.cov();
  const Scalar added = added_noise_of(ch);
  cov(2 * m, 2 * m) += added;
  cov(2 * m + 1, 2 * m + 1) += added;
  return GaussianState<Scalar>(state.mean(), std::move(cov), state.labels());
}

}  // namespace cvqnd

#endif  // CVQND_CHANNELS_H
