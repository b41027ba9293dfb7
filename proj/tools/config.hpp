#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <lorenzflow/lorenzflow.hpp>

namespace lorenzflow::cli {

enum class ExperimentKind { transform_roundtrip, flow_equivalence, isometry, gini_ascent, functional_audit };
std::string_view to_string(ExperimentKind k);

struct GridConfig {
  double lo = -6.0;
  double hi = 6.0;
  std::size_t n = 256;
  std::size_t cdf_n = 0;  // 0: same as n

  Grid1D x() const { return Grid1D::nodes(lo, hi, n); }
  Grid1D f() const { return Grid1D::cdf(cdf_n ? cdf_n : n); }
};

// uniform | truncated-gaussian | lognormal-like
struct DensityPreset {
  std::string preset = "truncated-gaussian";
  double mu = 0.0;
  double sigma = 1.0;

  Density make(const Grid1D& x) const;
};

struct StructureConfig {
  std::string tag = "w2";  // w2 | w2m | crho | cd
  std::string mobility = "one";
  double mobility_param = 1.0;
  std::string diffusivity = "one";
  double diffusivity_param = 0.5;

  GradientStructure make() const;
};

struct FunctionalConfig {
  std::string kind = "entropy";  // entropy | gini | potential | interaction
  std::string shape = "quadratic";
  double scale = 1.0;
  double width = 1.0;

  Functional make(Side side) const;
};

// Drift / diffusion presets for the Fokker-Planck and Lorenz PDE sides.
struct DynamicsConfig {
  std::string drift = "zero";      // zero | ou
  std::string diffusion = "one";   // one | rho
  Dynamics make() const;
};

struct FlowConfig {
  double dt = 0.0;
  double t_end = 0.0;
  std::size_t stride = 1;
  double cfl = 0.25;
  Direction direction = Direction::descent;
  RhsKind density_rhs = RhsKind::gradient_flow;
  RhsKind lorenz_rhs = RhsKind::gradient_flow;
  DynamicsConfig density_dynamics;
  DynamicsConfig lorenz_dynamics;
  Side side = Side::lorenz;  // gini-ascent only
  bool refine = false;       // repeat with dt/2 and twice the grid
};

struct IsometryConfig {
  std::vector<std::pair<DensityPreset, DensityPreset>> pairs;
  std::vector<StructureConfig> structures;
  std::size_t K = 32;
  std::size_t iterations = 50;
};

struct AuditConfig {
  std::vector<StructureConfig> structures;
  std::vector<FunctionalConfig> functionals;
  std::size_t tangents = 20;
  double epsilon = 1e-4;
  double support_lo = -2.0;
  double support_hi = 2.0;
};

struct ExperimentConfig {
  std::string name;
  ExperimentKind kind = ExperimentKind::transform_roundtrip;
  std::uint64_t seed = 0;
  std::string output_dir;  // relative to the output root; defaults to name
  GridConfig grid;
  std::vector<DensityPreset> initial;
  StructureConfig structure;
  FunctionalConfig functional;
  bool functional_given = false;
  FlowConfig flow;
  IsometryConfig isometry;
  AuditConfig audit;
  std::map<std::string, double> tolerances;

  double tolerance(const std::string& key) const;
};

// Throws Error(ConfigError) naming the offending field.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

}  // namespace lorenzflow::cli
