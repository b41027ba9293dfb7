#pragma once

#include <cstddef>
#include <vector>

#include "grid.hpp"

namespace lorenzflow {

inline constexpr double kPositivityFloor = 1e-12;
inline constexpr double kTailTolerance = 1e-6;
inline constexpr double kMassTolerance = 1e-10;

// Positive probability density sampled on a node grid. Values are read as a
// piecewise-linear function; the constructor clamps to the floor and
// renormalizes to unit mass.
class Density {
 public:
  Density(Grid1D grid, std::vector<double> values, double floor = kPositivityFloor);

  const Grid1D& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  double floor() const { return floor_; }
  // Number of nodes raised to the floor on construction.
  std::size_t clamp_count() const { return clamp_count_; }
  // Mass removed or added by clamping, before renormalization.
  double clamped_mass() const { return clamped_mass_; }
  // Raw mass before renormalization.
  double raw_mass() const { return raw_mass_; }

  double mass() const;
  double mean() const { return mean_; }
  double value_at(double x) const;

 private:
  Grid1D grid_;
  std::vector<double> values_;
  double floor_;
  std::size_t clamp_count_ = 0;
  double clamped_mass_ = 0.0;
  double raw_mass_ = 1.0;
  double mean_ = 0.0;
};

// Mass-weighted first moment of a piecewise-linear nodal function (exact).
double first_moment(const Grid1D& g, const std::vector<double>& v);

// Mass-weighted quadrature: int phi(x) rho(x) dx ~ sum_q weight_q phi(x_q),
// with density_q = rho(x_q) (floored).
struct Quadrature {
  std::vector<double> x, weight, density;
};

// Exact for the piecewise-linear reading of rho times a cubic phi (4-point
// Gauss per cell); midpoint half cells at the ends of a centered grid.
Quadrature density_quadrature(const Density& rho);

struct Cdf {
  Grid1D grid;
  std::vector<double> values;
};

struct InverseCdf {
  Grid1D grid;  // cdf grid
  std::vector<double> values;
};

}  // namespace lorenzflow
