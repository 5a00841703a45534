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

#include "cvqnd/mc_oracle.h"

#include "cvqnd/moments.h"

#include <limits>
#include <map>

namespace cvqnd::mc {

Matrix<double> symmetric_sqrt(const Matrix<double>& cov) {
  Eigen::SelfAdjointEigenSolver<Matrix<double>> solver(cov);
  if (solver.info() != Eigen::Success) throw std::invalid_argument("covariance eigendecomposition failed");
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  Vector<double> root(cov.rows());
  for (Index i = 0; i < cov.rows(); ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (lambda < -1e-10 * scale) throw std::invalid_argument("covariance is not positive semidefinite");
    root(i) = std::sqrt(std::max(0.0, lambda));
  }
  return solver.eigenvectors() * root.asDiagonal() * solver.eigenvectors().transpose();
}

SampleBatch sample_state(const GaussianState<double>& state, size_t n, uint64_t seed, uint64_t stream_id) {
  if (n < 1) throw std::invalid_argument("sample_state needs n >= 1");
  const Matrix<double> root = symmetric_sqrt(state.cov());
  const Index dim = state.mean().size();
  SampleBatch batch{n, Matrix<double>(static_cast<Index>(n), dim), seed, stream_id};
  const size_t n_chunks = (n + kChunkSize - 1) / kChunkSize;
  Vector<double> z(dim);
  for (size_t c = 0; c < n_chunks; ++c) {
    auto rng = chunk_engine(seed, stream_id, c);
    std::normal_distribution<double> normal;
    for (size_t i = c * kChunkSize; i < std::min(n, (c + 1) * kChunkSize); ++i) {
      for (Index k = 0; k < dim; ++k) z(k) = normal(rng);
      batch.values.row(static_cast<Index>(i)) = (state.mean() + root * z).transpose();
    }
  }
  return batch;
}

EmpiricalMoments moments_from(const MomentAccumulator& acc) {
  EmpiricalMoments m;
  m.n_samples = acc.count();
  m.mean = acc.mean();
  m.cov = acc.covariance();
  const double n = static_cast<double>(acc.count());
  m.mean_se = (m.cov.diagonal() / n).cwiseSqrt();
  const Index d = m.cov.rows();
  m.cov_se.resize(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      m.cov_se(i, j) = std::sqrt((m.cov(i, i) * m.cov(j, j) + m.cov(i, j) * m.cov(i, j)) / n);
    }
  }
  return m;
}

EmpiricalMoments empirical_moments(const SampleBatch& batch) {
  if (batch.n_samples < 2) throw std::invalid_argument("empirical_moments needs at least two samples");
  MomentAccumulator acc(batch.values.cols());
  for (Index i = 0; i < batch.values.rows(); ++i) acc.add(batch.values.row(i).transpose());
  return moments_from(acc);
}

namespace {

/// The circuit lowered onto a flat phase-space vector: every prepared mode
/// keeps its slot for the whole run; measured modes are simply never read again.
struct LoweredCircuit {
  Vector<double> mean;
  Matrix<double> root;  // sqrt of the joint initial covariance
  struct Op {
    enum Kind { Linear, Noise, Homodyne } kind = Linear;
    Matrix<double> matrix;  // Linear: full-register matrix
    Index mode = 0;         // Noise: target mode
    double sigma = 0;       // Noise: per-quadrature std dev
    Index source_row = 0;   // Homodyne
    std::vector<std::pair<Index, double>> shifts;
  };
  std::vector<Op> ops;
  Index out_a = 0, out_b = 0;
};

LoweredCircuit lower(const Circuit& circuit) {
  std::map<std::string, Index> slot;
  std::vector<GaussianState<double>> prepared;
  Index n_modes = 0;
  for (const auto& step : circuit.steps) {
    if (const auto* p = std::get_if<PrepareStep>(&step)) {
      for (const auto& name : p->state.labels()) {
        if (name.empty() || !slot.emplace(name, n_modes++).second) {
          throw std::invalid_argument("oracle needs unique named modes");
        }
      }
      prepared.push_back(cast_state<double>(p->state));
    }
  }
  LoweredCircuit out;
  const Index dim = 2 * n_modes;
  out.mean = Vector<double>::Zero(dim);
  Matrix<double> cov = Matrix<double>::Zero(dim, dim);
  Index offset = 0;
  for (const auto& s : prepared) {
    const Index k = s.mean().size();
    out.mean.segment(offset, k) = s.mean();
    cov.block(offset, offset, k, k) = s.cov();
    offset += k;
  }
  out.root = symmetric_sqrt(cov);
  auto row = [&](const QuadratureSelector& sel) { return 2 * slot.at(sel.mode.name) + static_cast<Index>(sel.axis); };
  for (const auto& step : circuit.steps) {
    if (const auto* g = std::get_if<GateStep>(&step)) {
      LoweredCircuit::Op op;
      op.matrix = Matrix<double>::Identity(dim, dim);
      const auto& m = g->map.matrix();
      for (size_t a = 0; a < g->modes.size(); ++a) {
        for (size_t b = 0; b < g->modes.size(); ++b) {
          op.matrix.block(2 * slot.at(g->modes[a]), 2 * slot.at(g->modes[b]), 2, 2) =
              m.block(2 * static_cast<Index>(a), 2 * static_cast<Index>(b), 2, 2);
        }
      }
      out.ops.push_back(std::move(op));
    } else if (const auto* c = std::get_if<ChannelStep>(&step)) {
      const double t = c->channel.transmitivity();
      LoweredCircuit::Op op;
      op.kind = LoweredCircuit::Op::Noise;
      op.mode = slot.at(c->mode);
      op.sigma = std::sqrt((1 - t * t) * c->channel.noise_var());
      out.ops.push_back(std::move(op));
    } else if (const auto* ms = std::get_if<MeasureStep>(&step)) {
      LoweredCircuit::Op op;
      op.kind = LoweredCircuit::Op::Homodyne;
      op.source_row = row(ms->rule.source);
      for (const auto& t : ms->rule.terms) op.shifts.emplace_back(row(t.target), t.gain);
      out.ops.push_back(std::move(op));
    }
  }
  out.out_a = slot.at(circuit.output_a);
  out.out_b = slot.at(circuit.output_b);
  return out;
}

}  // namespace

EmpiricalMoments run_circuit_trajectories(const Circuit& circuit, size_t n_runs, uint64_t seed, unsigned workers) {
  if (n_runs < 2) throw std::invalid_argument("oracle needs at least two runs");
  const LoweredCircuit lowered = lower(circuit);
  const Index dim = lowered.mean.size();
  const MomentAccumulator acc = chunked_moments(
      n_runs, seed, /*stream_id=*/2, workers, 4,
      [&](size_t, size_t begin, size_t end, std::mt19937_64& rng, MomentAccumulator& out) {
        std::normal_distribution<double> normal;
        Vector<double> z(dim), x(dim), tmp(dim), record(4);
        for (size_t run = begin; run < end; ++run) {
          for (Index k = 0; k < dim; ++k) z(k) = normal(rng);
          x.noalias() = lowered.root * z;
          x += lowered.mean;
          for (const auto& op : lowered.ops) {
            switch (op.kind) {
              case LoweredCircuit::Op::Linear:
                tmp.noalias() = op.matrix * x;
                x.swap(tmp);
                break;
              case LoweredCircuit::Op::Noise:
                x(2 * op.mode) += op.sigma * normal(rng);
                x(2 * op.mode + 1) += op.sigma * normal(rng);
                break;
              case LoweredCircuit::Op::Homodyne: {
                const double outcome = x(op.source_row);
                for (const auto& [target, gain] : op.shifts) x(target) += gain * outcome;
                break;
              }
            }
          }
          record << x(2 * lowered.out_a), x(2 * lowered.out_a + 1), x(2 * lowered.out_b), x(2 * lowered.out_b + 1);
          out.add(record);
        }
      });
  return moments_from(acc);
}

EmpiricalMoments run_protocol_trajectories(const ProtocolConfig& config, size_t n_runs, uint64_t seed,
                                           unsigned workers) {
  ProtocolConfig effective = config;
  if (effective.kind == ProtocolKind::ClassicalBenchmark) {
    effective.squeezing = 0;
    effective.idealize_resources = false;
  }
  return run_circuit_trajectories(build_circuit(effective), n_runs, seed, workers);
}

AgreementReport compare_to(const EmpiricalMoments& empirical, const GaussianState<double>& analytic,
                           double n_standard_errors) {
  double worst = 0;
  auto check = [&](double got, double want, double se) {
    const double diff = std::abs(got - want);
    const double z = se > 0 ? diff / se : (diff > 0 ? std::numeric_limits<double>::infinity() : 0.0);
    worst = std::max(worst, z);
  };
  for (Index i = 0; i < analytic.mean().size(); ++i) {
    check(empirical.mean(i), analytic.mean()(i), empirical.mean_se(i));
    for (Index j = 0; j < analytic.mean().size(); ++j) {
      check(empirical.cov(i, j), analytic.cov()(i, j), empirical.cov_se(i, j));
    }
  }
  return {worst <= n_standard_errors, worst};
}

}  // namespace cvqnd::mc
