#pragma once

#include <filesystem>
#include <string>

#include "experiment.hpp"

namespace lorenzflow::cli::detail {

struct Context {
  const ExperimentConfig& config;
  Mode mode;
  std::filesystem::path dir;
  Summary& summary;

  bool persist() const { return mode == Mode::run; }
  // Writes an artifact in run mode; no-op in verify mode.
  void write(const std::string& name, const std::string& contents) const;
};

// max |a - b| / max |b|
double rel_sup(const std::vector<double>& a, const std::vector<double>& b);

void transform_roundtrip(Context& ctx);
void flow_equivalence(Context& ctx);
void gini_ascent(Context& ctx);
void isometry(Context& ctx);
void functional_audit(Context& ctx);

}  // namespace lorenzflow::cli::detail
