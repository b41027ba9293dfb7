#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "density.hpp"
#include "geometry.hpp"
#include "lorenz.hpp"

namespace lorenzflow {

// Curves in time t in [0,1], K+1 uniform samples.
struct DensityPath {
  std::vector<double> times;
  std::vector<Density> states;
};

struct LorenzPath {
  std::vector<double> times;
  std::vector<LorenzCurve> states;
};

std::vector<double> uniform_times(std::size_t K);

struct ActionReport {
  double value = 0.0;
  std::vector<double> integrand;  // metric norm of the velocity, per interval
  Side side = Side::density;
  StructureTag tag = StructureTag::W2;
  std::string structure;
};

inline constexpr double kConstraintTolerance = 1e-6;

// sqrt(int_0^1 (G0 - G1)^2 df) on a cdf grid of n nodes (default: the finer
// of the two spatial grids).
double w2_distance_closed_form(const Density& rho0, const Density& rho1, std::size_t n = 0);

// Benamou-Brenier type action. Each interval uses forward differences in t at
// the averaged state, so the value is invariant under time reversal.
ActionReport action(const GradientStructure& S, const DensityPath& path);
ActionReport action(const GradientStructure& S, const LorenzPath& path);

// Quantile (displacement) interpolation: L_f(t) = (1 - t) G0 + t G1.
LorenzPath geodesic_w2(const Density& rho0, const Density& rho1, std::size_t K, const Grid1D& fgrid);

// Slice-wise transforms of whole paths.
DensityPath to_density(const LorenzPath& path, const Grid1D& xgrid);
LorenzPath to_lorenz(const DensityPath& path, const Grid1D& fgrid);

// Same slices with finite-difference derivative caches.
LorenzPath with_difference_caches(const LorenzPath& path);

struct OptimizerOptions {
  std::size_t iterations = 50;
  double tolerance = 1e-10;  // relative decrease that counts as converged
};

template <class Path>
struct MinimizeResult {
  Path path;
  ActionReport report;
  std::vector<double> history;  // nonincreasing
  bool converged = false;
};

// Projected gradient descent on the interior slices, endpoints fixed.
// Lorenz slices are re-cached by finite differences; convexity is kept by an
// isotonic projection of the slopes and, for C_D, L(1) is held fixed. Density
// slices keep unit mass (and the first moment for C_D).
MinimizeResult<LorenzPath> minimize_action(const GradientStructure& S, const LorenzPath& init,
                                           const OptimizerOptions& opts = {});
MinimizeResult<DensityPath> minimize_action(const GradientStructure& S, const DensityPath& init,
                                            const OptimizerOptions& opts = {});

// Pool-adjacent-violators: the nondecreasing least-squares fit.
std::vector<double> isotonic_fit(const std::vector<double>& v);

struct TransferCheck {
  double source_action = 0.0;
  double transferred_action = 0.0;
  double relative_error = 0.0;
};

struct IsometryReport {
  std::string structure;
  double density_action = 0.0;  // best action found on the density side
  double lorenz_action = 0.0;   // best action found on the Lorenz side
  TransferCheck lorenz_to_density;
  TransferCheck density_to_lorenz;
  double w2_closed_form_squared = -1.0;  // W2 only
  double tolerance = 1e-3;
  bool pass = false;
};

IsometryReport isometry_report(const GradientStructure& S, const Density& rho0, const Density& rho1,
                               std::size_t K, const OptimizerOptions& opts, double tolerance,
                               std::size_t cdf_nodes = 0);

// Curve-wise transfer of a prescribed density path.
TransferCheck transfer_check(const GradientStructure& S, const DensityPath& path, const Grid1D& fgrid);
TransferCheck transfer_check(const GradientStructure& S, const LorenzPath& path, const Grid1D& xgrid);

}  // namespace lorenzflow
