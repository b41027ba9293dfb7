#include "lorenzflow/lorenz.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lorenzflow/density.hpp"
#include "lorenzflow/errors.hpp"

namespace lorenzflow {

std::string_view to_string(Side side) { return side == Side::density ? "density" : "lorenz"; }

std::string_view to_string(TailClosure c) {
  return c == TailClosure::window ? "window" : "vanishing";
}

namespace {

void check_cdf_grid(const Grid1D& g) {
  if (!g.is_centered() || g.lo() != 0.0 || g.hi() != 1.0)
    fail(ErrorKind::GridMismatch, "Lorenz curves live on a centered grid over [0,1]");
}

}  // namespace

LorenzCurve::LorenzCurve(Grid1D fgrid, std::vector<double> values, std::vector<double> slope,
                         std::vector<double> curvature, double total, Support support,
                         TailClosures closure)
    : grid_(fgrid),
      values_(std::move(values)),
      slope_(std::move(slope)),
      curvature_(std::move(curvature)),
      total_(total),
      support_(support),
      closure_(closure) {
  check_cdf_grid(grid_);
  const std::size_t n = grid_.size();
  if (values_.size() != n || slope_.size() != n || curvature_.size() != n)
    fail(ErrorKind::GridMismatch, "Lorenz caches do not match the cdf grid");
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(values_[j]) || !std::isfinite(slope_[j]))
      fail(ErrorKind::InvalidArgument, "non-finite Lorenz value at node " + std::to_string(j));
    if (!(curvature_[j] >= kCurvatureFloor) || !std::isfinite(curvature_[j]))
      fail(ErrorKind::DegenerateCurvature,
           "L_ff = " + std::to_string(curvature_[j]) + " at node " + std::to_string(j));
  }
}

std::vector<double> lorenz_curvature(const Grid1D& fgrid, const std::vector<double>& L,
                                     const Support& support, TailClosures closure) {
  const std::size_t n = L.size();
  const double h = fgrid.spacing();
  std::vector<double> k(n);
  for (std::size_t j = 1; j + 1 < n; ++j) k[j] = (L[j + 1] - 2.0 * L[j] + L[j - 1]) / (h * h);
  // In vanishing tails 1/L_ff tends to zero; it is extrapolated quadratically
  // and kept a fixed fraction of its neighbour.
  auto q = [&](std::size_t j) { return 1.0 / k[j]; };
  if (closure.left == TailClosure::window)
    k[0] = ((L[1] - L[0]) / h - support.lo) / h;
  else
    k[0] = 1.0 / std::max(3.0 * q(1) - 3.0 * q(2) + q(3), 0.3 * q(1));
  if (closure.right == TailClosure::window)
    k[n - 1] = (support.hi - (L[n - 1] - L[n - 2]) / h) / h;
  else
    k[n - 1] = 1.0 / std::max(3.0 * q(n - 2) - 3.0 * q(n - 3) + q(n - 4), 0.3 * q(n - 2));
  return k;
}

std::vector<double> lorenz_slope(const Grid1D& fgrid, const std::vector<double>& L,
                                 const std::vector<double>& k, const Support& support,
                                 TailClosures closure) {
  const std::size_t n = L.size();
  const double h = fgrid.spacing();
  std::vector<double> s(n);
  for (std::size_t j = 1; j + 1 < n; ++j) s[j] = (L[j + 1] - L[j - 1]) / (2.0 * h);
  const double left_face = (L[1] - L[0]) / h;
  const double right_face = (L[n - 1] - L[n - 2]) / h;
  s[0] = closure.left == TailClosure::window ? 0.5 * (support.lo + left_face)
                                              : left_face - 0.5 * h * (0.75 * k[0] + 0.25 * k[1]);
  s[n - 1] = closure.right == TailClosure::window
                 ? 0.5 * (support.hi + right_face)
                 : right_face + 0.5 * h * (0.75 * k[n - 1] + 0.25 * k[n - 2]);
  return s;
}

double lorenz_total(const Grid1D& fgrid, const std::vector<double>& L, const std::vector<double>& s,
                    const std::vector<double>& k) {
  const double h = fgrid.spacing();
  const std::size_t n = L.size();
  return L[n - 1] + 0.5 * h * (s[n - 1] + 0.25 * h * k[n - 1]);
}

LorenzCurve LorenzCurve::from_values(Grid1D fgrid, std::vector<double> values, Support support,
                                     TailClosures closure) {
  check_cdf_grid(fgrid);
  if (values.size() != fgrid.size()) fail(ErrorKind::GridMismatch, "Lorenz values do not match grid");
  auto k = lorenz_curvature(fgrid, values, support, closure);
  auto s = lorenz_slope(fgrid, values, k, support, closure);
  const double total = lorenz_total(fgrid, values, s, k);
  return LorenzCurve(fgrid, std::move(values), std::move(s), std::move(k), total, support, closure);
}

DensityTangentResidual tangent_residual(const TangentVector& h) {
  return {integrate(h.grid, h.values), first_moment(h.grid, h.values)};
}

LorenzTangentResidual lorenz_tangent_residual(const TangentVector& eta) {
  const auto& e = eta.values;
  const std::size_t n = e.size();
  const double h = eta.grid.spacing();
  LorenzTangentResidual r;
  r.value_at_0 = (15.0 * e[0] - 10.0 * e[1] + 3.0 * e[2]) / 8.0;
  r.slope_at_0 = (-2.0 * e[0] + 3.0 * e[1] - e[2]) / h;
  r.value_at_1 = (15.0 * e[n - 1] - 10.0 * e[n - 2] + 3.0 * e[n - 3]) / 8.0;
  r.slope_at_1 = (2.0 * e[n - 1] - 3.0 * e[n - 2] + e[n - 3]) / h;
  return r;
}

}  // namespace lorenzflow
