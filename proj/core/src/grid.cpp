#include "lorenzflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lorenzflow/errors.hpp"

namespace lorenzflow {

Grid1D::Grid1D(double lo, double hi, std::size_t n, bool centered)
    : lo_(lo), hi_(hi), n_(n), centered_(centered) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    fail(ErrorKind::InvalidArgument, "grid needs finite lo < hi");
  if (n < 8) fail(ErrorKind::InvalidArgument, "grid needs at least 8 nodes, got " + std::to_string(n));
  h_ = centered ? (hi - lo) / static_cast<double>(n) : (hi - lo) / static_cast<double>(n - 1);
}

Grid1D Grid1D::nodes(double lo, double hi, std::size_t n) { return Grid1D(lo, hi, n, false); }
Grid1D Grid1D::centered(double lo, double hi, std::size_t n) { return Grid1D(lo, hi, n, true); }

double Grid1D::operator[](std::size_t i) const {
  const double s = centered_ ? static_cast<double>(i) + 0.5 : static_cast<double>(i);
  return lo_ + s * h_;
}

std::vector<double> Grid1D::points() const {
  std::vector<double> p(n_);
  for (std::size_t i = 0; i < n_; ++i) p[i] = (*this)[i];
  return p;
}

Grid1D Grid1D::translated(double c) const { return Grid1D(lo_ + c, hi_ + c, n_, centered_); }

bool Grid1D::operator==(const Grid1D& o) const {
  return lo_ == o.lo_ && hi_ == o.hi_ && n_ == o.n_ && centered_ == o.centered_;
}

bool same_grid(const Grid1D& a, const Grid1D& b, double tol) {
  const double scale = std::max(1.0, std::abs(a.hi() - a.lo()));
  return a.size() == b.size() && a.is_centered() == b.is_centered() &&
         std::abs(a.lo() - b.lo()) <= tol * scale && std::abs(a.hi() - b.hi()) <= tol * scale;
}

std::vector<double> quadrature_weights(const Grid1D& g) {
  std::vector<double> w(g.size(), g.spacing());
  if (!g.is_centered()) {
    w.front() *= 0.5;
    w.back() *= 0.5;
  }
  return w;
}

double integrate(const Grid1D& g, const std::vector<double>& v) {
  const auto w = quadrature_weights(g);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * v[i];
  return s;
}

std::vector<double> cumulative(const Grid1D& g, const std::vector<double>& v) {
  const std::size_t n = v.size();
  const double h = g.spacing();
  std::vector<double> c(n, 0.0);
  if (g.is_centered()) {
    const double v_edge = 1.5 * v[0] - 0.5 * v[1];
    c[0] = 0.25 * h * (v_edge + v[0]);
  }
  for (std::size_t i = 1; i < n; ++i) c[i] = c[i - 1] + 0.5 * h * (v[i - 1] + v[i]);
  return c;
}

std::vector<double> derivative(const Grid1D& g, const std::vector<double>& v) {
  const std::size_t n = v.size();
  const double h = g.spacing();
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  return d;
}

std::vector<double> second_derivative(const Grid1D& g, const std::vector<double>& v) {
  const std::size_t n = v.size();
  const double h2 = g.spacing() * g.spacing();
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h2;
  d[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
  d[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / h2;
  return d;
}

double interpolate(const Grid1D& g, const std::vector<double>& v, double x) {
  const double s = (x - g[0]) / g.spacing();
  const auto n = static_cast<std::ptrdiff_t>(v.size());
  auto i = static_cast<std::ptrdiff_t>(std::floor(s));
  i = std::clamp<std::ptrdiff_t>(i, 0, n - 2);
  const double t = s - static_cast<double>(i);
  return (1.0 - t) * v[i] + t * v[i + 1];
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& v, double x) {
  const std::size_t n = xs.size();
  std::size_t i;
  if (x <= xs[0]) {
    i = 0;
  } else if (x >= xs[n - 1]) {
    i = n - 2;
  } else {
    i = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
    i = std::min(i, n - 2);
  }
  const double dx = xs[i + 1] - xs[i];
  const double t = dx > 0.0 ? (x - xs[i]) / dx : 0.0;
  return (1.0 - t) * v[i] + t * v[i + 1];
}

namespace {

// Divided differences of the quadratic through nodes k-1, k, k+1.
struct LocalQuadratic {
  double d01, d012, x0, x1;
  LocalQuadratic(const std::vector<double>& xs, const std::vector<double>& v, std::size_t k) {
    const std::size_t c = std::clamp<std::size_t>(k, 1, xs.size() - 2);
    x0 = xs[c - 1];
    x1 = xs[c];
    const double x2 = xs[c + 1];
    d01 = (v[c] - v[c - 1]) / (x1 - x0);
    d012 = ((v[c + 1] - v[c]) / (x2 - x1) - d01) / (x2 - x0);
  }
  double slope(double x) const { return d01 + d012 * (2.0 * x - x0 - x1); }
  double curvature() const { return 2.0 * d012; }
};

}  // namespace

std::vector<double> derivative(const std::vector<double>& xs, const std::vector<double>& v) {
  std::vector<double> d(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) d[i] = LocalQuadratic(xs, v, i).slope(xs[i]);
  return d;
}

std::vector<double> second_derivative(const std::vector<double>& xs, const std::vector<double>& v) {
  std::vector<double> d(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) d[i] = LocalQuadratic(xs, v, i).curvature();
  return d;
}

}  // namespace lorenzflow
