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

#ifndef CVQND_SYMPLECTIC_H
#define CVQND_SYMPLECTIC_H

#include "cvqnd/phase_space.h"

#include <numbers>
#include <span>

namespace cvqnd {

inline constexpr double kSymplecticTolerance = 1e-12;

/// max |S Omega S^T - Omega|.
template <typename Derived>
typename Derived::Scalar symplectic_defect(const Eigen::MatrixBase<Derived>& s) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> omega = symplectic_form<Scalar>(s.rows() / 2);
  return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff();
}

/// Linear quadrature map S with S Omega S^T = Omega, checked on construction.
///
/// The check is absolute (kSymplecticTolerance) for maps with entries of order
/// one and scales with |S|^2 beyond that, which is the size of the rounding in
/// S Omega S^T itself.
template <typename Scalar = double>
class SymplecticMap {
 public:
  explicit SymplecticMap(Matrix<Scalar> matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() == 0 || matrix_.rows() % 2 != 0 || matrix_.rows() != matrix_.cols()) {
      throw std::invalid_argument("symplectic map must be a non-empty 2N x 2N matrix");
    }
    if (!matrix_.allFinite()) throw std::invalid_argument("symplectic map entries must be finite");
    const Scalar norm = matrix_.cwiseAbs().maxCoeff();
    const Scalar tol = Scalar(kSymplecticTolerance) * std::max(Scalar(1), norm * norm);
    if (symplectic_defect(matrix_) > tol) throw std::invalid_argument("matrix is not symplectic");
  }

  static SymplecticMap identity(Index n_modes) {
    return SymplecticMap(Matrix<Scalar>::Identity(2 * n_modes, 2 * n_modes));
  }

  Index n_modes() const { return matrix_.rows() / 2; }
  const Matrix<Scalar>& matrix() const { return matrix_; }

  /// S^{-1} = -Omega S^T Omega.
  SymplecticMap inverse() const {
    const Matrix<Scalar> omega = symplectic_form<Scalar>(n_modes());
    return SymplecticMap(-omega * matrix_.transpose() * omega);
  }

 private:
  Matrix<Scalar> matrix_;
};

/// Phase-space translation.
template <typename Scalar = double>
class Displacement {
 public:
  explicit Displacement(Vector<Scalar> offset) : offset_(std::move(offset)) {
    if (offset_.size() == 0 || offset_.size() % 2 != 0) throw std::invalid_argument("displacement needs 2N entries");
    if (!offset_.allFinite()) throw std::invalid_argument("displacement entries must be finite");
  }

  Index n_modes() const { return offset_.size() / 2; }
  const Vector<Scalar>& offset() const { return offset_; }

 private:
  Vector<Scalar> offset_;
};

namespace detail {
template <typename Scalar>
void require_finite(Scalar v, const char* what) {
  if (!std::isfinite(static_cast<double>(v))) throw std::invalid_argument(std::string(what) + " must be finite");
}
}  // namespace detail

/// QND coupling generated by X_A P_B. Mode 0 is the non-demolished mode A:
/// X_A' = X_A, P_A' = P_A - g P_B, X_B' = X_B + g X_A, P_B' = P_B.
template <typename Scalar = double>
SymplecticMap<Scalar> qnd_coupling(Scalar g) {
  detail::require_finite(g, "QND gain");
  Matrix<Scalar> s = Matrix<Scalar>::Identity(4, 4);
  s(1, 3) = -g;
  s(2, 0) = g;
  return SymplecticMap<Scalar>(std::move(s));
}

/// Rotation of (X, P) by theta; theta = pi negates both quadratures.
template <typename Scalar = double>
SymplecticMap<Scalar> phase_shift(Scalar theta) {
  using std::cos;
  using std::sin;
  detail::require_finite(theta, "phase");
  Matrix<Scalar> s(2, 2);
  s << cos(theta), sin(theta), -sin(theta), cos(theta);
  return SymplecticMap<Scalar>(std::move(s));
}

/// QND coupling with reversed sign, mode 0 = B, mode 1 = C:
/// X_C' = X_C, P_C' = P_C + G P_B, X_B' = X_B - G X_C, P_B' = P_B.
template <typename Scalar = double>
SymplecticMap<Scalar> qnd_sign_flipped(Scalar gain) {
  detail::require_finite(gain, "QND gain");
  Matrix<Scalar> s = Matrix<Scalar>::Identity(4, 4);
  s(0, 2) = -gain;
  s(3, 1) = gain;
  return SymplecticMap<Scalar>(std::move(s));
}

template <typename Scalar = double>
SymplecticMap<Scalar> squeezer(Scalar r) {
  using std::exp;
  detail::require_finite(r, "squeezing");
  Matrix<Scalar> s = Matrix<Scalar>::Zero(2, 2);
  s(0, 0) = exp(r);
  s(1, 1) = exp(-r);
  return SymplecticMap<Scalar>(std::move(s));
}

/// 50:50 mixer: q1' = (q1 + q2)/sqrt2, q2' = (q1 - q2)/sqrt2 for q in {X, P}.
template <typename Scalar = double>
SymplecticMap<Scalar> balanced_beam_splitter() {
  using std::sqrt;
  const Scalar h = Scalar(1) / sqrt(Scalar(2));
  Matrix<Scalar> s = Matrix<Scalar>::Zero(4, 4);
  for (Index q = 0; q < 2; ++q) {
    s(q, q) = h;
    s(q, 2 + q) = h;
    s(2 + q, q) = h;
    s(2 + q, 2 + q) = -h;
  }
  return SymplecticMap<Scalar>(std::move(s));
}

/// Acts as `map` on `targets` (in map-mode order), identity elsewhere.
template <typename Scalar>
SymplecticMap<Scalar> embed(const SymplecticMap<Scalar>& map, std::span<const Index> targets, Index n_total) {
  if (static_cast<Index>(targets.size()) != map.n_modes()) {
    throw std::invalid_argument("embed: target count does not match map arity");
  }
  for (size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= n_total) throw std::invalid_argument("embed: target out of range");
    for (size_t j = i + 1; j < targets.size(); ++j) {
      if (targets[i] == targets[j]) throw std::invalid_argument("embed: duplicate target");
    }
  }
  Matrix<Scalar> s = Matrix<Scalar>::Identity(2 * n_total, 2 * n_total);
  for (size_t a = 0; a < targets.size(); ++a) {
    for (size_t b = 0; b < targets.size(); ++b) {
      s.block(2 * targets[a], 2 * targets[b], 2, 2) =
          map.matrix().block(2 * static_cast<Index>(a), 2 * static_cast<Index>(b), 2, 2);
    }
  }
  return SymplecticMap<Scalar>(std::move(s));
}

template <typename Scalar>
SymplecticMap<Scalar> embed(const SymplecticMap<Scalar>& map, std::initializer_list<Index> targets, Index n_total) {
  return embed(map, std::span<const Index>(targets.begin(), targets.size()), n_total);
}

/// second . first
template <typename Scalar>
SymplecticMap<Scalar> compose(const SymplecticMap<Scalar>& second, const SymplecticMap<Scalar>& first) {
  if (second.n_modes() != first.n_modes()) throw std::invalid_argument("compose: mode count mismatch");
  return SymplecticMap<Scalar>(second.matrix() * first.matrix());
}

template <typename Scalar>
GaussianState<Scalar> apply(const GaussianState<Scalar>& state, const SymplecticMap<Scalar>& map) {
  if (state.n_modes() != map.n_modes()) throw std::invalid_argument("apply: mode count mismatch");
  const auto& s = map.matrix();
  return GaussianState<Scalar>(s * state.mean(), s * state.cov() * s.transpose(), state.labels());
}

template <typename Scalar>
GaussianState<Scalar> apply(const GaussianState<Scalar>& state, const Displacement<Scalar>& d) {
  if (state.n_modes() != d.n_modes()) throw std::invalid_argument("apply: mode count mismatch");
  return GaussianState<Scalar>(state.mean() + d.offset(), state.cov(), state.labels());
}

/// Applies a k-mode map to the named modes of a larger state.
template <typename Scalar>
GaussianState<Scalar> apply_on(const GaussianState<Scalar>& state, const SymplecticMap<Scalar>& map,
                               const std::vector<std::string>& modes) {
  std::vector<Index> targets;
  for (const auto& name : modes) targets.push_back(state.index_of(name));
  return apply(state, embed(map, std::span<const Index>(targets), state.n_modes()));
}

}  // namespace cvqnd

#endif  // CVQND_SYMPLECTIC_H
