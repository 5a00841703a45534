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

#ifndef CVQND_PHASE_SPACE_H
#define CVQND_PHASE_SPACE_H

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cvqnd {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

/// Ground-state variance of every quadrature (hbar = 1).
inline constexpr double kVacuumVariance = 0.5;
template <typename Scalar = double>
inline constexpr Scalar vacuum_variance = Scalar(kVacuumVariance);

inline constexpr double kSymmetryTolerance = 1e-10;
inline constexpr double kPhysicalityTolerance = 1e-9;

/// Quadratures are interleaved per mode: (x0, p0, x1, p1, ...).
enum class Quadrature { X = 0, P = 1 };

constexpr Index quadrature_index(Index mode, Quadrature q) {
  return 2 * mode + static_cast<Index>(q);
}

inline const char* to_string(Quadrature q) { return q == Quadrature::X ? "X" : "P"; }

/// Block-diagonal symplectic form with 2x2 blocks [[0, 1], [-1, 0]].
template <typename Scalar = double>
Matrix<Scalar> symplectic_form(Index n_modes) {
  Matrix<Scalar> omega = Matrix<Scalar>::Zero(2 * n_modes, 2 * n_modes);
  for (Index k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = Scalar(1);
    omega(2 * k + 1, 2 * k) = Scalar(-1);
  }
  return omega;
}

/// First and second moments of an N-mode Gaussian state.
///
/// The covariance is symmetrized on construction; asymmetry beyond
/// kSymmetryTolerance or non-finite entries are rejected. Physicality is not
/// enforced here (see check_physicality) so that limiting, unphysical
/// resources can still be propagated.
///
/// Each mode may carry a name. Empty names are anonymous; non-empty names are
/// unique within a state and survive mode removal.
template <typename Scalar = double>
class GaussianState {
 public:
  GaussianState(Vector<Scalar> mean, Matrix<Scalar> cov, std::vector<std::string> labels = {})
      : mean_(std::move(mean)), cov_(std::move(cov)), labels_(std::move(labels)) {
    if (cov_.rows() == 0 || cov_.rows() % 2 != 0 || cov_.rows() != cov_.cols()) {
      throw std::invalid_argument("covariance must be a non-empty 2N x 2N matrix");
    }
    if (mean_.size() != cov_.rows()) {
      throw std::invalid_argument("mean length does not match covariance dimension");
    }
    if (!mean_.allFinite() || !cov_.allFinite()) {
      throw std::invalid_argument("state moments must be finite");
    }
    const Scalar asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
    const Scalar scale = std::max(Scalar(1), cov_.cwiseAbs().maxCoeff());
    if (asym > Scalar(kSymmetryTolerance) * scale) {
      throw std::invalid_argument("covariance is not symmetric");
    }
    cov_ = (cov_ + cov_.transpose()).eval() / Scalar(2);
    if (labels_.empty()) labels_.resize(static_cast<size_t>(n_modes()));
    if (static_cast<Index>(labels_.size()) != n_modes()) {
      throw std::invalid_argument("label count does not match mode count");
    }
    for (size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i].empty()) continue;
      for (size_t j = i + 1; j < labels_.size(); ++j) {
        if (labels_[i] == labels_[j]) throw std::invalid_argument("duplicate mode label " + labels_[i]);
      }
    }
  }

  Index n_modes() const { return cov_.rows() / 2; }
  const Vector<Scalar>& mean() const { return mean_; }
  const Matrix<Scalar>& cov() const { return cov_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Position of a named mode; throws if absent.
  Index index_of(const std::string& name) const {
    auto it = std::find(labels_.begin(), labels_.end(), name);
    if (name.empty() || it == labels_.end()) {
      throw std::invalid_argument("no mode labelled '" + name + "'");
    }
    return static_cast<Index>(it - labels_.begin());
  }

  bool has_mode(const std::string& name) const {
    return !name.empty() && std::find(labels_.begin(), labels_.end(), name) != labels_.end();
  }

  Scalar variance(Index mode, Quadrature q) const {
    const Index i = quadrature_index(mode, q);
    return cov_(i, i);
  }
  Scalar expectation(Index mode, Quadrature q) const { return mean_(quadrature_index(mode, q)); }

 private:
  Vector<Scalar> mean_;
  Matrix<Scalar> cov_;
  std::vector<std::string> labels_;
};

template <typename Scalar = double>
GaussianState<Scalar> vacuum(Index n_modes) {
  if (n_modes < 1) throw std::invalid_argument("vacuum needs at least one mode");
  return GaussianState<Scalar>(Vector<Scalar>::Zero(2 * n_modes),
                               vacuum_variance<Scalar> * Matrix<Scalar>::Identity(2 * n_modes, 2 * n_modes));
}

/// Displaced vacuum with the given quadrature means.
template <typename Scalar = double>
GaussianState<Scalar> coherent(Scalar x, Scalar p) {
  Vector<Scalar> mean(2);
  mean << x, p;
  return GaussianState<Scalar>(std::move(mean), vacuum_variance<Scalar> * Matrix<Scalar>::Identity(2, 2));
}

enum class SqueezeAxis { X, P };

/// Single-mode squeezed vacuum; the squeezed quadrature has variance V0 e^{-2r}.
template <typename Scalar = double>
GaussianState<Scalar> squeezed_vacuum(Scalar r, SqueezeAxis axis) {
  using std::exp;
  if (!std::isfinite(static_cast<double>(r))) throw std::invalid_argument("squeezing must be finite");
  const Scalar v0 = vacuum_variance<Scalar>;
  Matrix<Scalar> cov = Matrix<Scalar>::Zero(2, 2);
  const Scalar squeezed = v0 * exp(Scalar(-2) * r);
  const Scalar anti = v0 * exp(Scalar(2) * r);
  cov(0, 0) = axis == SqueezeAxis::P ? anti : squeezed;
  cov(1, 1) = axis == SqueezeAxis::P ? squeezed : anti;
  return GaussianState<Scalar>(Vector<Scalar>::Zero(2), std::move(cov));
}

/// Product state a (x) b, modes of a first.
template <typename Scalar>
GaussianState<Scalar> tensor(const GaussianState<Scalar>& a, const GaussianState<Scalar>& b) {
  const Index na = a.mean().size(), nb = b.mean().size();
  Vector<Scalar> mean(na + nb);
  mean << a.mean(), b.mean();
  Matrix<Scalar> cov = Matrix<Scalar>::Zero(na + nb, na + nb);
  cov.topLeftCorner(na, na) = a.cov();
  cov.bottomRightCorner(nb, nb) = b.cov();
  std::vector<std::string> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  return GaussianState<Scalar>(std::move(mean), std::move(cov), std::move(labels));
}

template <typename Scalar>
GaussianState<Scalar> relabel(const GaussianState<Scalar>& state, std::vector<std::string> labels) {
  return GaussianState<Scalar>(state.mean(), state.cov(), std::move(labels));
}

/// Reduced state on the listed modes, in the listed order.
template <typename Scalar>
GaussianState<Scalar> marginal(const GaussianState<Scalar>& state, const std::vector<Index>& modes) {
  const Index k = static_cast<Index>(modes.size());
  if (k == 0) throw std::invalid_argument("marginal needs at least one mode");
  std::vector<Index> rows;
  std::vector<std::string> labels;
  for (Index m : modes) {
    if (m < 0 || m >= state.n_modes()) throw std::invalid_argument("marginal mode out of range");
    rows.push_back(2 * m);
    rows.push_back(2 * m + 1);
    labels.push_back(state.labels()[static_cast<size_t>(m)]);
  }
  Vector<Scalar> mean(2 * k);
  Matrix<Scalar> cov(2 * k, 2 * k);
  for (Index i = 0; i < 2 * k; ++i) {
    mean(i) = state.mean()(rows[i]);
    for (Index j = 0; j < 2 * k; ++j) cov(i, j) = state.cov()(rows[i], rows[j]);
  }
  return GaussianState<Scalar>(std::move(mean), std::move(cov), std::move(labels));
}

/// Symplectic spectrum of a covariance matrix, descending.
///
/// The eigenvalues of Omega^{-1} cov come in pairs +-i nu; the N moduli nu are
/// returned once each.
template <typename Derived>
std::vector<typename Derived::Scalar> symplectic_eigenvalues(const Eigen::MatrixBase<Derived>& cov) {
  using Scalar = typename Derived::Scalar;
  if (cov.rows() != cov.cols() || cov.rows() == 0 || cov.rows() % 2 != 0) {
    throw std::invalid_argument("symplectic_eigenvalues needs an even square matrix");
  }
  const Scalar scale = std::max(Scalar(1), cov.cwiseAbs().maxCoeff());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > Scalar(kSymmetryTolerance) * scale) {
    throw std::invalid_argument("symplectic_eigenvalues needs a symmetric matrix");
  }
  const Index n = cov.rows() / 2;
  // Omega^{-1} = -Omega.
  const Matrix<Scalar> m = -symplectic_form<Scalar>(n) * cov;
  Eigen::EigenSolver<Matrix<Scalar>> solver(m, /*computeEigenvectors=*/false);
  std::vector<Scalar> moduli;
  moduli.reserve(static_cast<size_t>(2 * n));
  for (Index i = 0; i < 2 * n; ++i) moduli.push_back(std::abs(solver.eigenvalues()(i)));
  std::sort(moduli.begin(), moduli.end(), std::greater<>());
  std::vector<Scalar> out;
  for (Index i = 0; i < n; ++i) out.push_back((moduli[2 * i] + moduli[2 * i + 1]) / Scalar(2));
  return out;
}

template <typename To, typename From>
GaussianState<To> cast_state(const GaussianState<From>& state) {
  return GaussianState<To>(state.mean().template cast<To>(), state.cov().template cast<To>(), state.labels());
}

template <typename Scalar>
struct PhysicalityReport {
  bool physical;
  /// min symplectic eigenvalue minus V0; negative means below the vacuum limit.
  Scalar margin;
};

template <typename Scalar>
PhysicalityReport<Scalar> check_physicality(const GaussianState<Scalar>& state) {
  const auto nu = symplectic_eigenvalues(state.cov());
  const Scalar margin = nu.back() - vacuum_variance<Scalar>;
  return {margin >= Scalar(-kPhysicalityTolerance), margin};
}

}  // namespace cvqnd

#endif  // CVQND_PHASE_SPACE_H
