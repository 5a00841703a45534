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

#ifndef CVQND_RANDOM_H
#define CVQND_RANDOM_H

// Generators for randomized property checks.

#include "cvqnd/symplectic.h"

#include <numbers>
#include <optional>
#include <random>

namespace cvqnd {

/// Product of 3N random elementary gates (rotations, squeezers, mixers, QND
/// couplings) on random modes.
template <typename Scalar = double, typename Rng>
SymplecticMap<Scalar> random_symplectic(Rng& rng, Index n_modes) {
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> sq(-1.0, 1.0);
  std::uniform_real_distribution<double> gain(-2.0, 2.0);
  std::uniform_int_distribution<Index> mode(0, n_modes - 1);
  std::uniform_int_distribution<int> kind(0, n_modes > 1 ? 3 : 1);
  auto s = SymplecticMap<Scalar>::identity(n_modes);
  for (Index k = 0; k < 3 * n_modes; ++k) {
    const Index a = mode(rng);
    Index b = mode(rng);
    while (n_modes > 1 && b == a) b = mode(rng);
    std::optional<SymplecticMap<Scalar>> g;
    switch (kind(rng)) {
      case 0:
        g = embed(phase_shift(Scalar(angle(rng))), {a}, n_modes);
        break;
      case 1:
        g = embed(squeezer(Scalar(sq(rng))), {a}, n_modes);
        break;
      case 2:
        g = embed(balanced_beam_splitter<Scalar>(), {a, b}, n_modes);
        break;
      default:
        g = embed(qnd_coupling(Scalar(gain(rng))), {a, b}, n_modes);
        break;
    }
    s = compose(*g, s);
  }
  return s;
}

/// Random symplectic image of a thermal state with symplectic eigenvalues in
/// [V0, 3 V0], with a random mean.
template <typename Scalar = double, typename Rng>
GaussianState<Scalar> random_physical_state(Rng& rng, Index n_modes) {
  std::uniform_real_distribution<double> excess(0.0, 2.0);
  std::normal_distribution<double> shift(0.0, 1.0);
  Matrix<Scalar> cov = Matrix<Scalar>::Zero(2 * n_modes, 2 * n_modes);
  Vector<Scalar> mean(2 * n_modes);
  for (Index k = 0; k < n_modes; ++k) {
    const Scalar nu = vacuum_variance<Scalar> * Scalar(1 + excess(rng));
    cov(2 * k, 2 * k) = cov(2 * k + 1, 2 * k + 1) = nu;
  }
  for (Index i = 0; i < 2 * n_modes; ++i) mean(i) = Scalar(shift(rng));
  return apply(GaussianState<Scalar>(std::move(mean), std::move(cov)), random_symplectic<Scalar>(rng, n_modes));
}

}  // namespace cvqnd

#endif  // CVQND_RANDOM_H
