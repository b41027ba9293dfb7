#pragma once

#include <map>
#include <string>
#include <vector>

#include "config.hpp"

namespace lorenzflow::cli {

enum class Mode { run, verify };

enum class Comparison { at_most, at_least };

struct Assertion {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::at_most;
  bool pass = false;
};

struct Summary {
  std::string name;
  ExperimentKind kind = ExperimentKind::transform_roundtrip;
  std::uint64_t seed = 0;
  std::vector<Assertion> assertions;
  std::map<std::string, double> metrics;
  std::map<std::string, std::vector<double>> series;
  std::vector<std::string> artifacts;  // relative to the run directory

  bool pass() const;
  void check(std::string name, double value, double tolerance, Comparison c = Comparison::at_most);
};

// LORENZFLOW_OUTPUT_ROOT, or "runs".
std::string output_root();

// Runs the experiment. In run mode, trajectories, reports, the plot and
// summary.json go to <root>/<output_dir>; verify writes summary.json only.
Summary run_experiment(const ExperimentConfig& config, Mode mode, const std::string& root);

// Deterministic: no timestamps, keys sorted, shortest round-trip numbers.
std::string summary_json(const Summary& s);

}  // namespace lorenzflow::cli
