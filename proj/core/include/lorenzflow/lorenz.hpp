#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "grid.hpp"

namespace lorenzflow {

enum class Side { density, lorenz };
std::string_view to_string(Side side);

inline constexpr double kCurvatureFloor = 1e-10;

// How the curvature 1/rho(G) is closed at the first and last cdf nodes.
//   window:    the density is resolved up to the truncation edges, so
//              L_f(0) = lo and L_f(1) = hi are known.
//   vanishing: the tails decay below grid resolution; 1/L_ff is extrapolated.
enum class TailClosure { window, vanishing };
std::string_view to_string(TailClosure c);

struct TailClosures {
  TailClosure left = TailClosure::window;
  TailClosure right = TailClosure::window;
};

struct Support {
  double lo = 0.0;
  double hi = 1.0;
};

// Convex Lorenz curve sampled on a centered cdf grid, with cached L_f (the
// inverse cdf) and L_ff (the reciprocal density), and L(1) (the mean).
class LorenzCurve {
 public:
  LorenzCurve(Grid1D fgrid, std::vector<double> values, std::vector<double> slope,
              std::vector<double> curvature, double total, Support support, TailClosures closure);

  // Derivative caches by finite differences of the values.
  static LorenzCurve from_values(Grid1D fgrid, std::vector<double> values, Support support,
                                 TailClosures closure);

  const Grid1D& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& slope() const { return slope_; }
  const std::vector<double>& curvature() const { return curvature_; }
  double operator[](std::size_t j) const { return values_[j]; }
  std::size_t size() const { return values_.size(); }
  double total() const { return total_; }
  const Support& support() const { return support_; }
  const TailClosures& closure() const { return closure_; }

 private:
  Grid1D grid_;
  std::vector<double> values_, slope_, curvature_;
  double total_;
  Support support_;
  TailClosures closure_;
};

// Finite-difference caches used by from_values, exposed for reuse.
std::vector<double> lorenz_curvature(const Grid1D& fgrid, const std::vector<double>& values,
                                     const Support& support, TailClosures closure);
std::vector<double> lorenz_slope(const Grid1D& fgrid, const std::vector<double>& values,
                                 const std::vector<double>& curvature, const Support& support,
                                 TailClosures closure);
double lorenz_total(const Grid1D& fgrid, const std::vector<double>& values,
                    const std::vector<double>& slope, const std::vector<double>& curvature);

struct TangentVector {
  Side side = Side::density;
  Grid1D grid = Grid1D::cdf(8);
  std::vector<double> values;
  bool moment_constrained = false;
};

// Residuals of the density-side tangent constraints: {int h, int x h}.
struct DensityTangentResidual {
  double mass = 0.0;
  double moment = 0.0;
};
DensityTangentResidual tangent_residual(const TangentVector& h);

// Boundary behaviour of a Lorenz tangent: eta(0) and eta'(0), eta'(1) by
// extrapolation to the ends of the cdf grid.
struct LorenzTangentResidual {
  double value_at_0 = 0.0;
  double slope_at_0 = 0.0;
  double slope_at_1 = 0.0;
  double value_at_1 = 0.0;
};
LorenzTangentResidual lorenz_tangent_residual(const TangentVector& eta);

}  // namespace lorenzflow
