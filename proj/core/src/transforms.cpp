#include "lorenzflow/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gauss.hpp"
#include "lorenzflow/errors.hpp"

namespace lorenzflow {

namespace {

// rho read as piecewise linear; cdf and first-moment integrals are exact.
class PiecewiseLinear {
 public:
  explicit PiecewiseLinear(const Density& rho) : g_(rho.grid()), v_(rho.values()) {
    // Nodes clamped on construction sit at floor / raw_mass after renormalization.
    collapsed_ = (1.0 + 1e-9) * rho.floor() * std::max(1.0, 1.0 / rho.raw_mass());
    const std::size_t n = v_.size();
    c_.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) c_[i] = c_[i - 1] + 0.5 * g_.spacing() * (v_[i - 1] + v_[i]);
    const double total = c_[n - 1];
    for (auto& c : c_) c = std::clamp(c / total, 0.0, 1.0);
    c_[n - 1] = 1.0;
    scale_ = total;
  }

  struct Point {
    std::size_t cell;
    double s;  // position in cell, [0,1]
  };

  const std::vector<double>& cdf() const { return c_; }

  Point locate(double f) const {
    const std::size_t n = v_.size();
    auto it = std::upper_bound(c_.begin(), c_.end(), f);
    std::size_t i = it == c_.begin() ? 0 : static_cast<std::size_t>(it - c_.begin()) - 1;
    i = std::min(i, n - 2);
    const double a = v_[i] / scale_, b = v_[i + 1] / scale_;
    const double h = g_.spacing();
    auto flat = [&](std::size_t k) {
      return k + 1 < n && v_[k] <= collapsed_ && v_[k + 1] <= collapsed_;
    };
    if (flat(i) && ((i > 0 && flat(i - 1)) || flat(i + 1)))
      fail(ErrorKind::NonInvertibleCdf,
           "cdf is flat near f = " + std::to_string(f) + " (x = " + std::to_string(g_[i]) + ")");
    // Solve C_i + h (a s + (b - a) s^2 / 2) = f for s in [0,1].
    const double d = std::max(0.0, (f - c_[i]) / h);
    const double disc = std::max(0.0, a * a + 2.0 * (b - a) * d);
    const double denom = a + std::sqrt(disc);
    double s = denom > 0.0 ? 2.0 * d / denom : 0.0;
    return {i, std::clamp(s, 0.0, 1.0)};
  }

  double x(const Point& p) const { return g_[p.cell] + g_.spacing() * p.s; }

  double value(const Point& p) const {
    return (1.0 - p.s) * v_[p.cell] / scale_ + p.s * v_[p.cell + 1] / scale_;
  }

 private:
  Grid1D g_;
  std::vector<double> v_;
  std::vector<double> c_;
  double scale_ = 1.0;
  double collapsed_ = 0.0;
};

// Exact running integrals of a piecewise-linear nodal function u:
// zeroth moment int_lo^x u and first moment int_lo^x y u.
class Moments {
 public:
  Moments(const Grid1D& g, const std::vector<double>& u) : g_(g), u_(u) {
    const std::size_t n = u.size();
    const double h = g.spacing();
    m0_.assign(n, 0.0);
    m1_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      m0_[i + 1] = m0_[i] + 0.5 * h * (u[i] + u[i + 1]);
      m1_[i + 1] = m1_[i] + h * (g[i] * 0.5 * (u[i] + u[i + 1]) + h * (u[i] + 2.0 * u[i + 1]) / 6.0);
    }
  }

  double zeroth(std::size_t i, double s) const {
    const double a = u_[i], b = u_[i + 1], h = g_.spacing();
    return m0_[i] + h * (a * s + 0.5 * (b - a) * s * s);
  }

  double first(std::size_t i, double s) const {
    const double a = u_[i], b = u_[i + 1], h = g_.spacing(), x = g_[i];
    return m1_[i] +
           h * (x * a * s + 0.5 * (x * (b - a) + h * a) * s * s + h * (b - a) * s * s * s / 3.0);
  }

 private:
  const Grid1D& g_;
  const std::vector<double>& u_;
  std::vector<double> m0_, m1_;
};

void check_cdf_grid(const Grid1D& fgrid) {
  if (!fgrid.is_centered() || fgrid.lo() != 0.0 || fgrid.hi() != 1.0)
    fail(ErrorKind::GridMismatch, "cdf grid must be centered on [0,1]");
}

}  // namespace

Cdf cdf(const Density& rho) { return {rho.grid(), PiecewiseLinear(rho).cdf()}; }

InverseCdf inverse_cdf(const Density& rho, const Grid1D& fgrid) {
  check_cdf_grid(fgrid);
  PiecewiseLinear pl(rho);
  std::vector<double> G(fgrid.size());
  for (std::size_t j = 0; j < G.size(); ++j) G[j] = pl.x(pl.locate(fgrid[j]));
  for (std::size_t j = 1; j < G.size(); ++j) G[j] = std::max(G[j], G[j - 1]);
  return {fgrid, std::move(G)};
}

TailClosures tail_closures(const Density& rho, double tail_tol) {
  const auto& v = rho.values();
  const double peak = *std::max_element(v.begin(), v.end());
  auto closure = [&](double edge) {
    return edge <= tail_tol * peak ? TailClosure::vanishing : TailClosure::window;
  };
  return {closure(v.front()), closure(v.back())};
}

LorenzCurve lorenz_map(const Density& rho, const Grid1D& fgrid) {
  check_cdf_grid(fgrid);
  PiecewiseLinear pl(rho);
  Moments mom(rho.grid(), rho.values());
  const std::size_t n = fgrid.size();
  std::vector<double> L(n), G(n), k(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto p = pl.locate(fgrid[j]);
    G[j] = pl.x(p);
    L[j] = mom.first(p.cell, p.s);
    k[j] = 1.0 / std::max(pl.value(p), kPositivityFloor);
  }
  const Support support{rho.grid().lo(), rho.grid().hi()};
  return LorenzCurve(fgrid, std::move(L), std::move(G), std::move(k), rho.mean(), support,
                     tail_closures(rho));
}

namespace {

using detail::kGaussNode;
using detail::kGaussWeight;

// Reconstruction reads the samples (G_j, f_j, 1/L_ff_j) as a Hermite cubic
// cdf, so rho = F' is piecewise quadratic and interior mass is exact.
double hermite_density(double x0, double x1, double f0, double f1, double r0, double r1, double x) {
  const double h = x1 - x0, t = (x - x0) / h;
  const double dh00 = 6.0 * t * t - 6.0 * t, dh10 = 3.0 * t * t - 4.0 * t + 1.0;
  const double dh01 = -dh00, dh11 = 3.0 * t * t - 2.0 * t;
  return (dh00 * f0 + dh01 * f1) / h + dh10 * r0 + dh11 * r1;
}

// Density beyond the outermost sample x0, out to the support edge: a
// log-quadratic fit through the three outermost samples (exact for Gaussian
// tails), rescaled so the tail carries exactly the leftover mass. A vanishing
// tail must decay; if the fit does not, exponential decay at rate rho(x0) / mass
// is used instead.
class Tail {
 public:
  Tail(const std::vector<double>& xs, const std::vector<double>& rs, double mass, bool left,
       TailClosure closure, double edge) {
    const std::size_t n = xs.size();
    const std::size_t i0 = left ? 0 : n - 1, i1 = left ? 1 : n - 2, i2 = left ? 2 : n - 3;
    x0_ = xs[i0];
    r0_ = rs[i0];
    dir_ = left ? -1.0 : 1.0;
    reach_ = std::max(0.0, dir_ * (edge - x0_));
    const double d1 = dir_ * (xs[i1] - x0_), d2 = dir_ * (xs[i2] - x0_);
    const double y0 = std::log(r0_), y1 = std::log(rs[i1]), y2 = std::log(rs[i2]);
    const double s1 = (y1 - y0) / d1, s12 = (y2 - y1) / (d2 - d1);
    e_ = (s12 - s1) / d2;
    b_ = s1 - e_ * d1;
    const bool decays = e_ <= 0.0 && b_ <= 0.0;
    if (!std::isfinite(b_) || !std::isfinite(e_) || (closure == TailClosure::vanishing && !decays)) {
      e_ = 0.0;
      b_ = -r0_ / mass;
    }
    // Stop where the shape has decayed by e^-40.
    if (b_ < 0.0 || e_ < 0.0) {
      double cut = b_ < 0.0 ? 40.0 / -b_ : std::numeric_limits<double>::infinity();
      if (e_ < 0.0) cut = std::min(cut, (b_ + std::sqrt(b_ * b_ - 160.0 * e_)) / (-2.0 * e_));
      reach_ = std::min(reach_, cut);
    }
    double total = 0.0;
    for_each_node([&](double d, double w) { total += w * shape(d); });
    scale_ = total > 0.0 && std::isfinite(mass / total) ? mass / total : 0.0;
  }

  double density(double x) const {
    const double d = dir_ * (x - x0_);
    return d > reach_ ? 0.0 : scale_ * shape(d);
  }

  // Calls fn(x, weight, density) on quadrature nodes; weights integrate dx.
  template <class Fn>
  void nodes(Fn&& fn) const {
    for_each_node([&](double d, double w) { fn(x0_ + dir_ * d, w, scale_ * shape(d)); });
  }

 private:
  double shape(double d) const { return r0_ * std::exp(std::min(50.0, b_ * d + e_ * d * d)); }

  template <class Fn>
  void for_each_node(Fn&& fn) const {
    if (!(reach_ > 0.0)) return;
    constexpr int kPanels = 16;
    const double w = reach_ / kPanels;
    for (int p = 0; p < kPanels; ++p)
      for (int q = 0; q < 4; ++q) fn(w * (p + 0.5 + 0.5 * kGaussNode[q]), 0.5 * w * kGaussWeight[q]);
  }

  double x0_ = 0.0, r0_ = 0.0, dir_ = 1.0, reach_ = 0.0;
  double b_ = 0.0, e_ = 0.0, scale_ = 1.0;
};

struct Reconstruction {
  std::vector<double> xs, rs, fs;
  Tail left, right;
};

Reconstruction reconstruct(const LorenzCurve& L) {
  const auto& xs = L.slope();
  const std::size_t n = xs.size();
  for (std::size_t j = 1; j < n; ++j)
    if (!(xs[j] > xs[j - 1]))
      fail(ErrorKind::ConvexityLoss, "L_f is not increasing at f = " + std::to_string(L.grid()[j]));
  std::vector<double> rs(n);
  for (std::size_t j = 0; j < n; ++j) rs[j] = 1.0 / L.curvature()[j];
  const auto& fg = L.grid();
  std::vector<double> fs(fg.points());
  Tail left(xs, rs, fs[0], true, L.closure().left, L.support().lo);
  Tail right(xs, rs, 1.0 - fs[n - 1], false, L.closure().right, L.support().hi);
  return {xs, std::move(rs), std::move(fs), left, right};
}

}  // namespace

Quadrature lorenz_quadrature(const LorenzCurve& L) {
  const auto R = reconstruct(L);
  Quadrature Q;
  auto push = [&](double x, double w, double rho) {
    Q.x.push_back(x);
    Q.weight.push_back(w * rho);
    Q.density.push_back(std::max(rho, kPositivityFloor));
  };
  R.left.nodes(push);
  for (std::size_t j = 0; j + 1 < R.xs.size(); ++j) {
    const double a = R.xs[j], b = R.xs[j + 1];
    for (int q = 0; q < 4; ++q) {
      const double x = 0.5 * (a + b) + 0.5 * (b - a) * kGaussNode[q];
      push(x, 0.5 * (b - a) * kGaussWeight[q],
           hermite_density(a, b, R.fs[j], R.fs[j + 1], R.rs[j], R.rs[j + 1], x));
    }
  }
  R.right.nodes(push);
  return Q;
}

Density density_from_lorenz(const LorenzCurve& L, const Grid1D& xgrid) {
  const auto R = reconstruct(L);
  const auto& xs = R.xs;
  const std::size_t n = xs.size();
  std::vector<double> rho(xgrid.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double x = xgrid[i];
    if (x < xs.front()) {
      rho[i] = R.left.density(x);
    } else if (x > xs.back()) {
      rho[i] = R.right.density(x);
    } else {
      while (j + 2 < n && xs[j + 1] < x) ++j;
      rho[i] = hermite_density(xs[j], xs[j + 1], R.fs[j], R.fs[j + 1], R.rs[j], R.rs[j + 1], x);
    }
  }

  // Match mass and first moment with a small affine tilt rho (alpha + beta x).
  const double xc = 0.5 * (xgrid.lo() + xgrid.hi());
  std::vector<double> xr(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) xr[i] = (xgrid[i] - xc) * rho[i];
  const double a11 = integrate(xgrid, rho), a12 = integrate(xgrid, xr);
  const double a21 = first_moment(xgrid, rho), a22 = first_moment(xgrid, xr);
  const double b1 = 1.0, b2 = L.total();
  const double det = a11 * a22 - a12 * a21;
  if (std::abs(det) > 1e-14 * std::abs(a11 * a22)) {
    const double alpha = (b1 * a22 - a12 * b2) / det;
    const double beta = (a11 * b2 - a21 * b1) / det;
    const double span = 0.5 * (xgrid.hi() - xgrid.lo());
    if (alpha - std::abs(beta) * span > 0.5 * alpha)
      for (std::size_t i = 0; i < rho.size(); ++i) rho[i] *= alpha + beta * (xgrid[i] - xc);
  }
  return Density(xgrid, std::move(rho));
}

std::vector<double> dt_inverse_cdf(const Density& rho, const std::vector<double>& h,
                                   const Grid1D& fgrid) {
  check_cdf_grid(fgrid);
  if (h.size() != rho.size()) fail(ErrorKind::GridMismatch, "perturbation does not match density grid");
  PiecewiseLinear pl(rho);
  Moments mom(rho.grid(), h);
  std::vector<double> out(fgrid.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const auto p = pl.locate(fgrid[j]);
    out[j] = -mom.zeroth(p.cell, p.s) / pl.value(p);
  }
  return out;
}

TangentVector dt_lorenz(const Density& rho, const std::vector<double>& h, const Grid1D& fgrid) {
  check_cdf_grid(fgrid);
  if (h.size() != rho.size()) fail(ErrorKind::GridMismatch, "perturbation does not match density grid");
  PiecewiseLinear pl(rho);
  Moments mom(rho.grid(), h);
  TangentVector eta{Side::lorenz, fgrid, std::vector<double>(fgrid.size()), false};
  for (std::size_t j = 0; j < fgrid.size(); ++j) {
    const auto p = pl.locate(fgrid[j]);
    eta.values[j] = mom.first(p.cell, p.s) - pl.x(p) * mom.zeroth(p.cell, p.s);
  }
  return eta;
}

}  // namespace lorenzflow
