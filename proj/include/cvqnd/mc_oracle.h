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

#ifndef CVQND_MC_ORACLE_H
#define CVQND_MC_ORACLE_H

// Phase-space Monte Carlo. Quadratures are sampled as classical Gaussian
// variables from the Wigner function, pushed through the linear maps, and
// measured by reading the sampled value. This is exact for first and second
// moments of every Gaussian protocol here and shares no code with the
// covariance algebra it checks.

#include "cvqnd/moments.h"
#include "cvqnd/protocols.h"

namespace cvqnd::mc {

struct SampleBatch {
  size_t n_samples = 0;
  /// n_samples x 2N, one phase-space point per row.
  Matrix<double> values;
  uint64_t seed = 0;
  uint64_t stream_id = 0;
};

struct EmpiricalMoments {
  size_t n_samples = 0;
  Vector<double> mean;
  Matrix<double> cov;
  Vector<double> mean_se;
  /// sqrt((cov_ii cov_jj + cov_ij^2) / n)
  Matrix<double> cov_se;
};

/// Symmetric square root of a covariance matrix. Eigenvalues in
/// [-1e-10 * scale, 0) are clipped to zero; anything more negative throws.
Matrix<double> symmetric_sqrt(const Matrix<double>& cov);

SampleBatch sample_state(const GaussianState<double>& state, size_t n, uint64_t seed, uint64_t stream_id = 0);

EmpiricalMoments empirical_moments(const SampleBatch& batch);

/// Moments with Gaussian standard errors from an accumulator.
EmpiricalMoments moments_from(const MomentAccumulator& acc);

/// Final (X_A, P_A, X_B, P_B) moments over n_runs sampled trajectories.
EmpiricalMoments run_circuit_trajectories(const Circuit& circuit, size_t n_runs, uint64_t seed, unsigned workers = 1);

EmpiricalMoments run_protocol_trajectories(const ProtocolConfig& config, size_t n_runs, uint64_t seed,
                                           unsigned workers = 1);

struct AgreementReport {
  bool within;
  /// Largest |empirical - analytic| / SE over mean and covariance entries.
  double worst_z;
};

AgreementReport compare_to(const EmpiricalMoments& empirical, const GaussianState<double>& analytic,
                           double n_standard_errors = 5.0);

}  // namespace cvqnd::mc

#endif  // CVQND_MC_ORACLE_H
