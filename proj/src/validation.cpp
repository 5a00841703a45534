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

#include "cvqnd/validation.h"

#include "cvqnd/mc_oracle.h"
#include "cvqnd/random.h"

#include <cstdio>

namespace cvqnd {
namespace {

std::string format(const char* fmt, double a, double b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

void oracle_checks(const ValidationOptions& opt, std::vector<CheckResult>& out) {
  for (ProtocolKind kind : kAllProtocolKinds) {
    for (double r : {0.0, 1.0}) {
      for (double t : {0.8, 1.0}) {
        ProtocolConfig c;
        c.kind = kind;
        c.squeezing = r;
        if (t < 1) c.channel = ChannelModel<double>(t);
        c.input_a = coherent(1.0, -0.5);
        c.input_b = coherent(0.3, 2.0);
        const auto ensemble = run_protocol(c).output;
        const auto empirical = mc::run_protocol_trajectories(c, opt.runs, opt.seed, opt.workers);
        const auto agreement = mc::compare_to(empirical, ensemble);
        out.push_back({std::string("oracle ") + std::string(to_string(kind)) + format(" r=%g T=%g", r, t),
                       agreement.within, format("worst |z| = %.3f", agreement.worst_z)});
      }
    }
  }
}

void determinism_check(const ValidationOptions& opt, std::vector<CheckResult>& out) {
  ProtocolConfig c;
  c.kind = ProtocolKind::TeleportBaseline;
  c.squeezing = 1.0;
  c.channel = ChannelModel<double>(0.8);
  const size_t n = std::min<size_t>(opt.runs, 200000);
  const auto one = mc::run_protocol_trajectories(c, n, opt.seed, 1);
  const auto many = mc::run_protocol_trajectories(c, n, opt.seed, 4);
  const bool same = one.mean == many.mean && one.cov == many.cov;
  out.push_back({"oracle worker-count invariance", same, same ? "bit-identical" : "results differ"});
}

void invariant_checks(const ValidationOptions& opt, std::vector<CheckResult>& out) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<Index> modes(1, 5);
  double worst_defect = 0, worst_margin = 1, worst_schur = 0;
  for (size_t i = 0; i < opt.random_cases; ++i) {
    const Index n = modes(rng);
    const auto s = random_symplectic(rng, n);
    const double norm = s.matrix().cwiseAbs().maxCoeff();
    worst_defect = std::max(worst_defect, symplectic_defect(s.matrix()) / std::max(1.0, norm * norm));

    const auto state = random_physical_state(rng, std::max<Index>(n, 2));
    worst_margin = std::min(worst_margin, check_physicality(state).margin);

    std::uniform_int_distribution<Index> pick(0, state.n_modes() - 1);
    const Index m = pick(rng);
    const QuadratureSelector sel{ModeLabel::at(m), i % 2 ? Quadrature::P : Quadrature::X};
    const auto conditioned = condition_on_outcome(state, sel, 0.3);
    worst_margin = std::min(worst_margin, check_physicality(conditioned).margin);
    std::vector<Index> kept;
    for (Index k = 0; k < state.n_modes(); ++k) {
      if (k != m) kept.push_back(k);
    }
    const Matrix<double> gap = marginal(state, kept).cov() - conditioned.cov();
    Eigen::SelfAdjointEigenSolver<Matrix<double>> eig(gap);
    worst_schur = std::min(worst_schur, eig.eigenvalues().minCoeff());
  }
  out.push_back({"random maps symplectic", worst_defect <= kSymplecticTolerance,
                 format("worst scaled defect %.3g", worst_defect)});
  out.push_back({"random states and conditionals physical", worst_margin >= -kPhysicalityTolerance,
                 format("worst margin %.3g", worst_margin)});
  out.push_back({"conditioning never increases covariance", worst_schur >= -1e-9,
                 format("min eigenvalue of reduction %.3g", worst_schur)});

  double worst_output = 1;
  for (ProtocolKind kind : kAllProtocolKinds) {
    for (double g : {0.25, 1.0, 4.0}) {
      for (double r : {0.0, 1.0, 3.0}) {
        for (double t : {0.6, 1.0}) {
          ProtocolConfig c;
          c.kind = kind;
          c.gain_alice = c.gain_bob = g;
          c.squeezing = r;
          if (t < 1) c.channel = ChannelModel<double>(t);
          worst_output = std::min(worst_output, check_physicality(run_protocol(c).output).margin);
        }
      }
    }
  }
  out.push_back({"protocol outputs physical", worst_output >= -kPhysicalityTolerance,
                 format("worst margin %.3g", worst_output)});
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
  std::vector<CheckResult> out;
  invariant_checks(options, out);
  oracle_checks(options, out);
  determinism_check(options, out);
  return out;
}

}  // namespace cvqnd
