#include "lorenzflow/density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gauss.hpp"
#include "lorenzflow/errors.hpp"

namespace lorenzflow {

double first_moment(const Grid1D& g, const std::vector<double>& v) {
  const double h = g.spacing();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double a = g[i], b = g[i + 1];
    s += h / 6.0 * (v[i] * (2.0 * a + b) + v[i + 1] * (a + 2.0 * b));
  }
  return s;
}

Density::Density(Grid1D grid, std::vector<double> values, double floor)
    : grid_(grid), values_(std::move(values)), floor_(floor) {
  if (grid_.is_centered()) fail(ErrorKind::InvalidArgument, "density needs a node grid");
  if (values_.size() != grid_.size())
    fail(ErrorKind::GridMismatch, "density has " + std::to_string(values_.size()) +
                                      " values on a grid of " + std::to_string(grid_.size()));
  if (!(floor_ > 0.0)) fail(ErrorKind::InvalidArgument, "positivity floor must be positive");
  const auto w = quadrature_weights(grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]))
      fail(ErrorKind::InvalidArgument, "non-finite density value at node " + std::to_string(i));
    if (values_[i] < floor_) {
      clamped_mass_ += w[i] * (floor_ - values_[i]);
      values_[i] = floor_;
      ++clamp_count_;
    }
  }
  raw_mass_ = integrate(grid_, values_);
  if (!(raw_mass_ > 0.0)) fail(ErrorKind::InvalidArgument, "density has no mass");
  for (auto& v : values_) v /= raw_mass_;
  mean_ = first_moment(grid_, values_);
}

double Density::mass() const { return integrate(grid_, values_); }

double Density::value_at(double x) const {
  if (x < grid_.lo() || x > grid_.hi()) return floor_;
  return interpolate(grid_, values_, x);
}

Quadrature density_quadrature(const Density& rho) {
  const auto& g = rho.grid();
  const double h = g.spacing();
  Quadrature Q;
  for (std::size_t i = 0; i + 1 < rho.size(); ++i)
    for (int q = 0; q < 4; ++q) {
      const double t = 0.5 + 0.5 * detail::kGaussNode[q];
      const double r = (1.0 - t) * rho[i] + t * rho[i + 1];
      Q.x.push_back(g[i] + t * h);
      Q.weight.push_back(0.5 * h * detail::kGaussWeight[q] * r);
      Q.density.push_back(std::max(r, rho.floor()));
    }
  return Q;
}

}  // namespace lorenzflow
