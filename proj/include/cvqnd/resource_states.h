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

#ifndef CVQND_RESOURCE_STATES_H
#define CVQND_RESOURCE_STATES_H

#include "cvqnd/phase_space.h"
#include "cvqnd/symplectic.h"

namespace cvqnd {

/// Two-mode entangled resource with Var(X1 + X2) = Var(P1 - P2) = 2 V0 e^{-2r}.
///
/// Built by mixing an X-squeezed and a P-squeezed vacuum on the balanced
/// beam splitter.
template <typename Scalar = double>
GaussianState<Scalar> epr_pair(Scalar r) {
  const auto in = tensor(squeezed_vacuum<Scalar>(r, SqueezeAxis::X), squeezed_vacuum<Scalar>(r, SqueezeAxis::P));
  return apply(in, balanced_beam_splitter<Scalar>());
}

/// Infinite-squeezing limit of the P-squeezed vacuum, keeping the
/// anti-squeezed quadrature at V0. Not physical; every protocol output is
/// independent of the anti-squeezed variance, so this isolates channel noise.
template <typename Scalar = double>
GaussianState<Scalar> ideal_p_squeezed_resource() {
  Matrix<Scalar> cov = Matrix<Scalar>::Zero(2, 2);
  cov(0, 0) = vacuum_variance<Scalar>;
  return GaussianState<Scalar>(Vector<Scalar>::Zero(2), std::move(cov));
}

/// Infinite-squeezing limit of epr_pair: X1 + X2 and P1 - P2 are exactly zero,
/// single-mode variances held at V0. Not physical.
template <typename Scalar = double>
GaussianState<Scalar> ideal_epr_resource() {
  const Scalar v = vacuum_variance<Scalar>;
  Matrix<Scalar> cov = Matrix<Scalar>::Zero(4, 4);
  cov(0, 0) = cov(2, 2) = v;
  cov(0, 2) = cov(2, 0) = -v;
  cov(1, 1) = cov(3, 3) = v;
  cov(1, 3) = cov(3, 1) = v;
  return GaussianState<Scalar>(Vector<Scalar>::Zero(4), std::move(cov));
}

}  // namespace cvqnd

#endif  // CVQND_RESOURCE_STATES_H
