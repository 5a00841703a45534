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

// Command-line front end: run | sweep | compare | validate.
//
// Exit codes: 0 ok, 1 validation failure, 2 usage or configuration error.

#include "CLI11.hpp"
#include "cvqnd/analysis.h"
#include "cvqnd/validation.h"

#include <fstream>
#include <iostream>
#include <set>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::set<std::string> kKeys = {"protocol", "gain",  "gain-alice", "gain-bob", "squeezing",
                                     "transmitivity", "noise-var", "idealize-resources", "mode",
                                     "runs", "seed", "workers"};

/// Settings from --config, overridden by flags given on the command line.
struct Settings {
  std::map<std::string, std::string> values;
  std::string config_path;
  std::string out_path;

  void register_options(CLI::App& app, const std::vector<std::string>& keys) {
    app.add_option("--config", config_path, "key = value settings file");
    app.add_option("--out", out_path, "write output here instead of stdout");
    for (const auto& key : keys) {
      if (key == "idealize-resources") {
        app.add_flag_callback("--idealize-resources", [this] { flags["idealize-resources"] = "true"; },
                              "zero out resource noise (infinite squeezing limit)");
      } else {
        app.add_option_function<std::string>("--" + key, [this, key](const std::string& v) { flags[key] = v; });
      }
    }
  }

  void resolve() {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("cannot open config file " + config_path);
      try {
        values = cvqnd::parse_key_value(in);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      for (const auto& [k, v] : values) {
        if (!kKeys.contains(k)) throw UsageError("unknown config key '" + k + "'");
      }
    }
    for (const auto& [k, v] : flags) values[k] = v;
  }

  bool has(const std::string& k) const { return values.contains(k); }

  std::string text(const std::string& k, const std::string& fallback) const {
    auto it = values.find(k);
    return it == values.end() ? fallback : it->second;
  }

  double real(const std::string& k, double fallback) const {
    auto list = reals(k, {fallback});
    if (list.size() != 1) throw UsageError("--" + k + " takes a single value");
    return list.front();
  }

  std::vector<double> reals(const std::string& k, std::vector<double> fallback) const {
    if (!has(k)) return fallback;
    try {
      return cvqnd::parse_real_list(values.at(k));
    } catch (const std::invalid_argument& e) {
      throw UsageError("--" + k + ": " + e.what());
    }
  }

  uint64_t integer(const std::string& k, uint64_t fallback) const {
    if (!has(k)) return fallback;
    try {
      size_t used = 0;
      const auto v = std::stoull(values.at(k), &used);
      if (used != values.at(k).size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw UsageError("--" + k + " needs a non-negative integer");
    }
  }

  bool boolean(const std::string& k) const {
    const auto v = text(k, "false");
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw UsageError("--" + k + " needs true or false");
  }

  std::vector<cvqnd::ProtocolKind> protocols(const std::string& fallback) const {
    std::vector<cvqnd::ProtocolKind> out;
    std::stringstream ss(text("protocol", fallback));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      auto kind = cvqnd::parse_protocol_kind(item);
      if (!kind) throw UsageError("unknown protocol '" + item + "' (fig1, fig2, teleport, classical, ideal)");
      out.push_back(*kind);
    }
    return out;
  }

  cvqnd::RunMode run_mode() const {
    const auto mode = text("mode", "ensemble");
    if (mode == "ensemble") return cvqnd::EnsembleMode{};
    if (mode == "trajectory") {
      return cvqnd::TrajectoryMode{integer("seed", 0), integer("runs", 100000),
                                   static_cast<unsigned>(integer("workers", 1))};
    }
    throw UsageError("--mode must be ensemble or trajectory");
  }

  std::map<std::string, std::string> flags;
};

/// Runs `body` with the chosen output stream.
template <typename Body>
int with_output(const std::string& path, Body&& body) {
  if (path.empty()) return body(std::cout);
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open output file " + path);
  return body(out);
}

int cmd_run(const Settings& s) {
  cvqnd::ProtocolConfig c;
  const auto kinds = s.protocols("fig1");
  if (kinds.size() != 1) throw UsageError("run takes exactly one --protocol");
  c.kind = kinds.front();
  const double g = s.real("gain", 1.0);
  c.gain_alice = s.real("gain-alice", g);
  c.gain_bob = s.real("gain-bob", g);
  c.squeezing = s.real("squeezing", 0.0);
  const double t = s.real("transmitivity", 1.0);
  const double v = s.real("noise-var", 2 * cvqnd::kVacuumVariance);
  if (t < 1 || s.has("transmitivity")) c.channel = cvqnd::ChannelModel<double>(t, v);
  c.idealize_resources = s.boolean("idealize-resources");
  c.mode = s.run_mode();
  const auto result = cvqnd::run_protocol(c);
  const auto row = cvqnd::comparison_row(c, result);
  return with_output(s.out_path, [&](std::ostream& out) {
    out << cvqnd::kCsvHeader << '\n' << cvqnd::to_csv(row) << '\n';
    out << "# output covariance over (X_A, P_A, X_B, P_B), V0 = " << cvqnd::kVacuumVariance << '\n';
    const Eigen::IOFormat fmt(Eigen::FullPrecision, 0, ", ", "\n", "# ", "");
    out << result.output.cov().format(fmt) << '\n';
    out << "# output mean\n" << result.output.mean().transpose().format(fmt) << '\n';
    return kExitOk;
  });
}

cvqnd::SweepSpec sweep_spec(const Settings& s, const std::string& default_protocols) {
  cvqnd::SweepSpec spec;
  spec.protocols = s.protocols(default_protocols);
  spec.gains = s.reals("gain", {1.0});
  spec.gains_alice = s.reals("gain-alice", {});
  spec.gains_bob = s.reals("gain-bob", {});
  spec.squeezings = s.reals("squeezing", {0.0});
  spec.transmitivities = s.reals("transmitivity", {1.0});
  spec.noise_vars = s.reals("noise-var", {2 * cvqnd::kVacuumVariance});
  spec.idealize_resources = s.boolean("idealize-resources");
  spec.mode = s.run_mode();
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

int cmd_sweep(const Settings& s) {
  const auto spec = sweep_spec(s, "fig1,fig2");
  const auto rows = cvqnd::run_sweep(spec, static_cast<unsigned>(s.integer("workers", 1)));
  return with_output(s.out_path, [&](std::ostream& out) {
    cvqnd::write_csv(out, rows);
    return kExitOk;
  });
}

int cmd_compare(const Settings& s) {
  if (s.has("protocol")) throw UsageError("compare always runs fig1, fig2, teleport and classical");
  auto spec = sweep_spec(s, "fig1,fig2,teleport,classical");
  if (!s.has("gain")) spec.gains = {0.5, 1.0, 2.0};
  const auto rows = cvqnd::run_sweep(spec, static_cast<unsigned>(s.integer("workers", 1)));
  const double t = spec.transmitivities.front() < 1 ? spec.transmitivities.front() : 0.8;
  const double v = spec.noise_vars.front();
  const auto at_one = cvqnd::crossing_at(1.0, t, v);
  const bool equal_at_one = std::abs(at_one.metric_fig1 - at_one.metric_fig2) <= 1e-12;
  const int code = with_output(s.out_path, [&](std::ostream& out) {
    cvqnd::write_csv(out, rows);
    return kExitOk;
  });
  std::cerr.precision(17);
  std::cerr << "# crossing check (idealized resources, T=" << t << ", noise_var=" << v << ")\n";
  for (double g : spec.gains) {
    const auto c = cvqnd::crossing_at(g, t, v);
    const char* order = c.metric_fig2 < c.metric_fig1 - 1e-12   ? "fig2 < fig1"
                        : c.metric_fig2 > c.metric_fig1 + 1e-12 ? "fig2 > fig1"
                                                                : "fig2 = fig1";
    std::cerr << "#   G=" << g << ": metric fig1=" << c.metric_fig1 << " fig2=" << c.metric_fig2 << "  " << order
              << '\n';
  }
  std::cerr << "# G=1 equality: " << (equal_at_one ? "PASS" : "FAIL") << '\n';
  return code != kExitOk ? code : (equal_at_one ? kExitOk : kExitValidation);
}

int cmd_validate(uint64_t seed, size_t runs, unsigned workers, size_t cases) {
  const auto checks = cvqnd::run_validation({seed, runs, workers, cases});
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  (" << c.detail << ")\n";
    ok = ok && c.passed;
  }
  std::cout << (ok ? "validation passed\n" : "validation FAILED\n");
  return ok ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian simulator for QND couplings at a distance"};
  app.require_subcommand(1);

  const std::vector<std::string> protocol_keys = {"protocol", "gain", "gain-alice", "gain-bob", "squeezing",
                                                  "transmitivity", "noise-var", "idealize-resources", "mode",
                                                  "runs", "seed", "workers"};
  Settings run_settings, sweep_settings, compare_settings;
  auto* run = app.add_subcommand("run", "run one protocol and print its comparison row and covariance");
  run_settings.register_options(*run, protocol_keys);
  auto* sweep = app.add_subcommand("sweep", "evaluate a grid (comma-separated values) and emit CSV");
  sweep_settings.register_options(*sweep, protocol_keys);
  auto* compare = app.add_subcommand("compare", "fig1/fig2/teleport/classical side by side plus crossing check");
  compare_settings.register_options(*compare, protocol_keys);

  auto* validate = app.add_subcommand("validate", "ensemble-vs-oracle agreement and invariant suite");
  uint64_t seed = 7;
  size_t runs = 1000000, cases = 1000;
  unsigned workers = 1;
  validate->add_option("--seed", seed);
  validate->add_option("--runs", runs)->check(CLI::Range(size_t{2}, std::numeric_limits<size_t>::max()));
  validate->add_option("--workers", workers);
  validate->add_option("--cases", cases, "randomized invariant cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) {
      run_settings.resolve();
      return cmd_run(run_settings);
    }
    if (*sweep) {
      sweep_settings.resolve();
      return cmd_sweep(sweep_settings);
    }
    if (*compare) {
      compare_settings.resolve();
      return cmd_compare(compare_settings);
    }
    return cmd_validate(seed, runs, workers, cases);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
