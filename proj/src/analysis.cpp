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

#include "cvqnd/analysis.h"

#include <atomic>
#include <cstdio>
#include <exception>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

namespace cvqnd {

DuanReport duan_criterion(const GaussianState<double>& state) {
  if (state.n_modes() != 2) throw std::invalid_argument("duan_criterion needs a two-mode state");
  const auto& c = state.cov();
  // Rows: 0 X_A, 1 P_A, 2 X_B, 3 P_B.
  DuanReport r;
  r.plus_value = (c(0, 0) + c(2, 2) + 2 * c(0, 2)) + (c(1, 1) + c(3, 3) - 2 * c(1, 3));
  r.minus_value = (c(0, 0) + c(2, 2) - 2 * c(0, 2)) + (c(1, 1) + c(3, 3) + 2 * c(1, 3));
  r.value = std::min(r.plus_value, r.minus_value);
  r.entangled = r.value < r.bound - 1e-12;
  return r;
}

NoiseReport added_noise_report(const ProtocolResult& result, const GaussianState<double>& ideal, ProtocolKind kind) {
  return added_noise_report(result.output, ideal, result.resource_only, kind);
}

double channel_noise_metric(const NoiseReport& report) { return report.channel.pa + report.channel.xb; }

ComparisonRow comparison_row(const ProtocolConfig& config, const ProtocolResult& result) {
  ComparisonRow row;
  row.protocol = std::string(to_string(config.kind));
  row.gain_alice = config.gain_alice;
  row.gain_bob = config.gain_bob;
  row.squeezing = config.kind == ProtocolKind::ClassicalBenchmark ? 0.0 : config.squeezing;
  row.transmitivity = config.channel ? config.channel->transmitivity() : 1.0;
  row.noise_var = config.channel ? config.channel->noise_var() : 0.0;
  const auto& n = result.noise_report;
  row.var_add_pa = n.total.pa;
  row.var_add_xb = n.total.xb;
  row.resource_pa = n.resource.pa;
  row.resource_xb = n.resource.xb;
  row.channel_pa = n.channel.pa;
  row.channel_xb = n.channel.xb;
  row.metric = channel_noise_metric(n);
  const auto duan = duan_criterion(result.output);
  row.duan_value = duan.value;
  row.duan_bound = duan.bound;
  return row;
}

std::string to_csv(const ComparisonRow& row) {
  std::string out = row.protocol;
  char buf[40];
  for (double v : {row.gain_alice, row.gain_bob, row.squeezing, row.transmitivity, row.noise_var, row.var_add_pa,
                   row.var_add_xb, row.resource_pa, row.resource_xb, row.channel_pa, row.channel_xb, row.metric,
                   row.duan_value, row.duan_bound}) {
    std::snprintf(buf, sizeof buf, ",%.17g", v);
    out += buf;
  }
  return out;
}

void write_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& row : rows) out << to_csv(row) << '\n';
}

void SweepSpec::validate() const {
  if (protocols.empty()) throw std::invalid_argument("sweep needs at least one protocol");
  const bool split = !gains_alice.empty() || !gains_bob.empty();
  if (split ? (gains_alice.empty() || gains_bob.empty()) : gains.empty()) {
    throw std::invalid_argument("sweep needs a non-empty gain grid");
  }
  if (squeezings.empty() || transmitivities.empty() || noise_vars.empty()) {
    throw std::invalid_argument("sweep grids must be non-empty");
  }
  for (double g : gains) {
    if (!std::isfinite(g)) throw std::invalid_argument("gains must be finite");
  }
  for (double r : squeezings) {
    if (!std::isfinite(r) || r < 0) throw std::invalid_argument("squeezing must be finite and >= 0");
  }
  for (double t : transmitivities) {
    if (!(t > 0 && t <= 1)) throw std::invalid_argument("transmitivity must lie in (0, 1]");
  }
  for (double v : noise_vars) {
    if (!std::isfinite(v) || v < 0) throw std::invalid_argument("noise variance must be finite and >= 0");
  }
}

std::vector<ProtocolConfig> SweepSpec::expand() const {
  validate();
  std::vector<std::pair<double, double>> gain_pairs;
  if (!gains_alice.empty()) {
    for (double ga : gains_alice) {
      for (double gb : gains_bob) gain_pairs.emplace_back(ga, gb);
    }
  } else {
    for (double g : gains) gain_pairs.emplace_back(g, g);
  }
  std::vector<ProtocolConfig> out;
  for (ProtocolKind kind : protocols) {
    for (auto [ga, gb] : gain_pairs) {
      for (double r : squeezings) {
        for (double t : transmitivities) {
          for (double v : noise_vars) {
            ProtocolConfig c;
            c.kind = kind;
            c.gain_alice = ga;
            c.gain_bob = gb;
            c.squeezing = r;
            if (t < 1) c.channel = ChannelModel<double>(t, v);
            c.idealize_resources = idealize_resources;
            c.mode = mode;
            out.push_back(std::move(c));
          }
        }
      }
    }
  }
  return out;
}

std::vector<ComparisonRow> run_sweep(const SweepSpec& spec, unsigned workers) {
  const auto configs = spec.expand();
  std::vector<std::optional<ComparisonRow>> rows(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < configs.size(); i = next++) {
      try {
        rows[i] = comparison_row(configs[i], run_protocol(configs[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::max(1u, workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  std::vector<ComparisonRow> out;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*rows[i]));
  }
  return out;
}

CrossingCheck crossing_at(double gain, double transmitivity, double noise_var) {
  ProtocolConfig c;
  c.gain_alice = c.gain_bob = gain;
  c.idealize_resources = true;
  if (transmitivity < 1) c.channel = ChannelModel<double>(transmitivity, noise_var);
  c.kind = ProtocolKind::Fig1;
  const double m1 = channel_noise_metric(run_fig1(c).noise_report);
  c.kind = ProtocolKind::Fig2;
  const double m2 = channel_noise_metric(run_fig2(c).noise_report);
  return {gain, m1, m2};
}

namespace {
std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}
}  // namespace

std::map<std::string, std::string> parse_key_value(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: " + item);
    }
    if (used != item.size()) throw std::invalid_argument("not a number: " + item);
    out.push_back(v);
  }
  return out;
}

}  // namespace cvqnd
