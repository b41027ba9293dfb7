#pragma once

#include <cstddef>
#include <vector>

namespace lorenzflow {

// Uniform 1D grid. Node grids put nodes on both endpoints; centered grids put
// them at cell midpoints (used for the cdf variable f in (0,1)).
class Grid1D {
 public:
  static Grid1D nodes(double lo, double hi, std::size_t n);
  static Grid1D centered(double lo, double hi, std::size_t n);
  static Grid1D cdf(std::size_t n) { return centered(0.0, 1.0, n); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t size() const { return n_; }
  bool is_centered() const { return centered_; }
  double spacing() const { return h_; }
  double operator[](std::size_t i) const;
  std::vector<double> points() const;

  // Shifted copy (same spacing and node count).
  Grid1D translated(double c) const;

  bool operator==(const Grid1D& other) const;
  bool operator!=(const Grid1D& other) const { return !(*this == other); }

 private:
  Grid1D(double lo, double hi, std::size_t n, bool centered);
  double lo_, hi_, h_;
  std::size_t n_;
  bool centered_;
};

bool same_grid(const Grid1D& a, const Grid1D& b, double tol = 1e-12);

// Quadrature on a grid: trapezoid on node grids, midpoint on centered grids.
std::vector<double> quadrature_weights(const Grid1D& g);
double integrate(const Grid1D& g, const std::vector<double>& v);

// Running integral from g.lo(). On centered grids the first half cell uses the
// linearly extrapolated endpoint value.
std::vector<double> cumulative(const Grid1D& g, const std::vector<double>& v);

// Second-order first and second derivatives (one-sided at the ends).
std::vector<double> derivative(const Grid1D& g, const std::vector<double>& v);
std::vector<double> second_derivative(const Grid1D& g, const std::vector<double>& v);
// Same on strictly increasing nonuniform nodes, from the local quadratic.
std::vector<double> derivative(const std::vector<double>& xs, const std::vector<double>& v);
std::vector<double> second_derivative(const std::vector<double>& xs, const std::vector<double>& v);

// Linear interpolation of (g, v) at x; linear extrapolation outside.
double interpolate(const Grid1D& g, const std::vector<double>& v, double x);
// Same for a monotone increasing abscissa table.
double interpolate(const std::vector<double>& xs, const std::vector<double>& v, double x);

}  // namespace lorenzflow
