#include "lorenzflow/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "lorenzflow/errors.hpp"
#include "lorenzflow/transforms.hpp"

namespace lorenzflow {

namespace {

using Vec = std::vector<double>;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kHeldEdge = 1;

void check_times(const std::vector<double>& times, std::size_t states) {
  if (times.size() != states || states < 2)
    fail(ErrorKind::InvalidArgument, "path needs at least two time samples, one per state");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) fail(ErrorKind::InvalidArgument, "path times must increase");
}

// Central difference of a scalar function with a relative step.
template <class Fn>
double slope_of(Fn&& fn, double at) {
  const double h = 1e-6 * std::max(std::abs(at), 1e-8);
  return (fn(at + h) - fn(at - h)) / (2.0 * h);
}

}  // namespace

std::vector<double> uniform_times(std::size_t K) {
  if (K < 1) fail(ErrorKind::InvalidArgument, "need K >= 1");
  Vec t(K + 1);
  for (std::size_t k = 0; k <= K; ++k) t[k] = static_cast<double>(k) / static_cast<double>(K);
  return t;
}

double w2_distance_closed_form(const Density& rho0, const Density& rho1, std::size_t n) {
  if (n == 0) n = std::max(rho0.size(), rho1.size());
  const auto fgrid = Grid1D::cdf(n);
  const auto G0 = inverse_cdf(rho0, fgrid).values;
  const auto G1 = inverse_cdf(rho1, fgrid).values;
  Vec d(n);
  for (std::size_t j = 0; j < n; ++j) d[j] = (G0[j] - G1[j]) * (G0[j] - G1[j]);
  return std::sqrt(integrate(fgrid, d));
}

ActionReport action(const GradientStructure& S, const DensityPath& path) {
  check_times(path.times, path.states.size());
  const auto& g = path.states.front().grid();
  for (const auto& s : path.states)
    if (!same_grid(s.grid(), g)) fail(ErrorKind::GridMismatch, "path slices live on different grids");
  if (!S.transport_type()) {
    const double mu = path.states.front().mean();
    for (const auto& s : path.states)
      if (std::abs(s.mean() - mu) > kConstraintTolerance)
        fail(ErrorKind::ConstraintViolation, "first moment varies along the path by " +
                                                 std::to_string(std::abs(s.mean() - mu)));
  }
  ActionReport rep{0.0, {}, Side::density, S.tag, S.name()};
  const std::size_t n = g.size();
  Vec rate(n), integrand(n);
  for (std::size_t k = 0; k + 1 < path.states.size(); ++k) {
    const double dt = path.times[k + 1] - path.times[k];
    const auto& a = path.states[k].values();
    const auto& b = path.states[k + 1].values();
    for (std::size_t i = 0; i < n; ++i) rate[i] = (b[i] - a[i]) / dt;
    const Vec flux = S.transport_type() ? cumulative(g, rate) : cumulative(g, cumulative(g, rate));
    for (std::size_t i = 0; i < n; ++i) {
      const double r = 0.5 * (a[i] + b[i]);
      const double coef = S.transport_type() ? S.m(r) * r : S.d(g[i], r) * r;
      integrand[i] = flux[i] * flux[i] / coef;
    }
    const double e = integrate(g, integrand);
    rep.integrand.push_back(e);
    rep.value += dt * e;
  }
  return rep;
}

ActionReport action(const GradientStructure& S, const LorenzPath& path) {
  check_times(path.times, path.states.size());
  const auto& g = path.states.front().grid();
  for (const auto& s : path.states)
    if (!same_grid(s.grid(), g)) fail(ErrorKind::GridMismatch, "path slices live on different grids");
  if (!S.transport_type()) {
    const double total = path.states.front().total();
    for (const auto& s : path.states)
      if (std::abs(s.total() - total) > kConstraintTolerance)
        fail(ErrorKind::ConstraintViolation,
             "L(1) varies along the path by " + std::to_string(std::abs(s.total() - total)));
  }
  ActionReport rep{0.0, {}, Side::lorenz, S.tag, S.name()};
  const std::size_t n = g.size();
  const double h = g.spacing();
  for (std::size_t k = 0; k + 1 < path.states.size(); ++k) {
    const double dt = path.times[k + 1] - path.times[k];
    const auto& A = path.states[k];
    const auto& B = path.states[k + 1];
    double e = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double kappa = 0.5 * (A.curvature()[j] + B.curvature()[j]);
      if (S.transport_type()) {
        const double rate = (B.slope()[j] - A.slope()[j]) / dt;
        e += h * rate * rate / S.m(1.0 / kappa);
      } else {
        const double rate = kappa * (B[j] - A[j]) / dt;
        const double x = 0.5 * (A.slope()[j] + B.slope()[j]);
        e += h * rate * rate / S.d(x, 1.0 / kappa);
      }
    }
    rep.integrand.push_back(e);
    rep.value += dt * e;
  }
  return rep;
}

LorenzPath geodesic_w2(const Density& rho0, const Density& rho1, std::size_t K, const Grid1D& fgrid) {
  const auto L0 = lorenz_map(rho0, fgrid);
  const auto L1 = lorenz_map(rho1, fgrid);
  LorenzPath path{uniform_times(K), {}};
  const std::size_t n = fgrid.size();
  const TailClosures closure{
      L0.closure().left == TailClosure::vanishing && L1.closure().left == TailClosure::vanishing
          ? TailClosure::vanishing
          : TailClosure::window,
      L0.closure().right == TailClosure::vanishing && L1.closure().right == TailClosure::vanishing
          ? TailClosure::vanishing
          : TailClosure::window};
  for (double t : path.times) {
    Vec v(n), s(n), k(n);
    for (std::size_t j = 0; j < n; ++j) {
      v[j] = (1.0 - t) * L0[j] + t * L1[j];
      s[j] = (1.0 - t) * L0.slope()[j] + t * L1.slope()[j];
      k[j] = (1.0 - t) * L0.curvature()[j] + t * L1.curvature()[j];
    }
    const Support sup{(1.0 - t) * L0.support().lo + t * L1.support().lo,
                      (1.0 - t) * L0.support().hi + t * L1.support().hi};
    path.states.emplace_back(fgrid, std::move(v), std::move(s), std::move(k),
                             (1.0 - t) * L0.total() + t * L1.total(), sup, closure);
  }
  return path;
}

DensityPath to_density(const LorenzPath& path, const Grid1D& xgrid) {
  DensityPath out{path.times, {}};
  for (const auto& L : path.states) out.states.push_back(density_from_lorenz(L, xgrid));
  return out;
}

LorenzPath to_lorenz(const DensityPath& path, const Grid1D& fgrid) {
  LorenzPath out{path.times, {}};
  for (const auto& rho : path.states) out.states.push_back(lorenz_map(rho, fgrid));
  return out;
}

LorenzPath with_difference_caches(const LorenzPath& path) {
  LorenzPath out{path.times, {}};
  for (const auto& L : path.states)
    out.states.push_back(LorenzCurve::from_values(L.grid(), L.values(), L.support(), L.closure()));
  return out;
}

std::vector<double> isotonic_fit(const std::vector<double>& v) {
  // Blocks of (mean, weight); merge while decreasing.
  std::vector<double> mean, weight;
  std::vector<std::size_t> count;
  for (double x : v) {
    mean.push_back(x);
    weight.push_back(1.0);
    count.push_back(1);
    while (mean.size() > 1 && mean[mean.size() - 2] > mean.back()) {
      const std::size_t b = mean.size() - 1;
      const double w = weight[b - 1] + weight[b];
      mean[b - 1] = (weight[b - 1] * mean[b - 1] + weight[b] * mean[b]) / w;
      weight[b - 1] = w;
      count[b - 1] += count[b];
      mean.pop_back();
      weight.pop_back();
      count.pop_back();
    }
  }
  Vec out;
  out.reserve(v.size());
  for (std::size_t b = 0; b < mean.size(); ++b) out.insert(out.end(), count[b], mean[b]);
  return out;
}

namespace {

// ---- generic projected descent -------------------------------------------

struct Problem {
  std::function<double(const std::vector<Vec>&)> objective;        // +inf if infeasible
  std::function<std::vector<Vec>(const std::vector<Vec>&)> direction;  // descent direction
  std::function<void(std::vector<Vec>&)> project;
};

struct DescentResult {
  std::vector<Vec> x;
  std::vector<double> history;
  bool converged = false;
};

DescentResult descend(const Problem& p, std::vector<Vec> x, const OptimizerOptions& opts) {
  DescentResult r;
  double A = p.objective(x);
  r.history.push_back(A);
  if (!std::isfinite(A)) fail(ErrorKind::InvalidArgument, "initial path is not admissible");
  double alpha = -1.0;
  for (std::size_t it = 0; it < opts.iterations; ++it) {
    if (A <= 0.0) {
      r.converged = true;
      break;
    }
    const auto d = p.direction(x);
    double dmax = 0.0, xmax = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
      for (std::size_t i = 0; i < x[k].size(); ++i) {
        dmax = std::max(dmax, std::abs(d[k][i]));
        xmax = std::max(xmax, std::abs(x[k][i]));
      }
    if (dmax == 0.0) {
      r.converged = true;
      break;
    }
    if (alpha < 0.0) alpha = 1e-2 * std::max(xmax, 1e-12) / dmax;
    bool accepted = false;
    double A_new = A;
    std::vector<Vec> trial;
    for (int tries = 0; tries < 60; ++tries) {
      trial = x;
      for (std::size_t k = 0; k < x.size(); ++k)
        for (std::size_t i = 0; i < x[k].size(); ++i) trial[k][i] += alpha * d[k][i];
      p.project(trial);
      A_new = p.objective(trial);
      if (A_new < A) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      r.converged = true;
      break;
    }
    const double decrease = A - A_new;
    x = std::move(trial);
    r.history.push_back(A_new);
    const bool small = decrease <= opts.tolerance * A;
    A = A_new;
    alpha *= 2.0;
    if (small) {
      r.converged = true;
      break;
    }
  }
  r.x = std::move(x);
  return r;
}

// ---- Lorenz side -----------------------------------------------------------

struct Caches {
  Vec slope, curvature;
};

Caches caches_of(const LorenzCurve& like, const Vec& v) {
  Caches c;
  c.curvature = lorenz_curvature(like.grid(), v, like.support(), like.closure());
  c.slope = lorenz_slope(like.grid(), v, c.curvature, like.support(), like.closure());
  return c;
}

double total_of(const LorenzCurve& like, const Vec& v) {
  const auto c = caches_of(like, v);
  return lorenz_total(like.grid(), v, c.slope, c.curvature);
}

// Interior slices are re-cached by finite differences plus a fixed
// correction: the gap between the initial slice's own caches and the
// difference caches of its values. The initial path is reproduced exactly
// and moves are differenced.
struct Correction {
  Caches caches;
  double total = 0.0;
};

Correction correction_of(const LorenzCurve& L) {
  const auto fd = caches_of(L, L.values());
  Correction c{{Vec(L.size()), Vec(L.size())}, L.total() - lorenz_total(L.grid(), L.values(), fd.slope, fd.curvature)};
  for (std::size_t j = 0; j < L.size(); ++j) {
    c.caches.slope[j] = L.slope()[j] - fd.slope[j];
    c.caches.curvature[j] = L.curvature()[j] - fd.curvature[j];
  }
  return c;
}

struct LorenzSetup {
  const GradientStructure& S;
  LorenzPath base;                  // endpoints and grid/support/closure per slice
  std::vector<Correction> offsets;  // per interior slice
  double total = 0.0;

  double total_of(std::size_t k, const Vec& v) const {
    return lorenzflow::total_of(base.states[k + 1], v) + offsets[k].total;
  }
};

LorenzPath lorenz_from_vars(const LorenzSetup& s, const std::vector<Vec>& x) {
  LorenzPath p{s.base.times, {}};
  p.states.push_back(s.base.states.front());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto& like = s.base.states[k + 1];
    const auto& off = s.offsets[k];
    auto c = caches_of(like, x[k]);
    const double total = lorenz_total(like.grid(), x[k], c.slope, c.curvature) + off.total;
    for (std::size_t j = 0; j < c.slope.size(); ++j) {
      c.slope[j] += off.caches.slope[j];
      c.curvature[j] += off.caches.curvature[j];
    }
    p.states.emplace_back(like.grid(), x[k], std::move(c.slope), std::move(c.curvature), total, like.support(),
                          like.closure());
  }
  p.states.push_back(s.base.states.back());
  return p;
}

// Vector-Jacobian product of the cache maps, by colored central differences.
// Every cache entry depends on values within distance 5, so inputs spaced 13
// apart can be perturbed together.
Vec caches_vjp(const LorenzCurve& like, const Vec& v, const Vec& gs, const Vec& gk) {
  const std::size_t n = v.size();
  constexpr std::size_t kColors = 13;
  constexpr std::size_t kReach = 6;
  Vec out(n, 0.0), vp, vm;
  for (std::size_t c = 0; c < kColors; ++c) {
    vp = v;
    vm = v;
    Vec delta(n, 0.0);
    for (std::size_t j = c; j < n; j += kColors) {
      delta[j] = 1e-7 * std::max(std::abs(v[j]), 1e-3);
      vp[j] += delta[j];
      vm[j] -= delta[j];
    }
    const auto P = caches_of(like, vp);
    const auto M = caches_of(like, vm);
    for (std::size_t j = c; j < n; j += kColors) {
      const std::size_t lo = j > kReach ? j - kReach : 0, hi = std::min(n - 1, j + kReach);
      double s = 0.0;
      for (std::size_t i = lo; i <= hi; ++i)
        s += gs[i] * (P.slope[i] - M.slope[i]) + gk[i] * (P.curvature[i] - M.curvature[i]);
      out[j] = s / (2.0 * delta[j]);
    }
  }
  return out;
}

std::vector<Vec> lorenz_gradient(const LorenzSetup& s, const std::vector<Vec>& x) {
  const auto path = lorenz_from_vars(s, x);
  const std::size_t K = path.states.size() - 1;
  const std::size_t n = path.states.front().size();
  const double h = path.states.front().grid().spacing();
  const auto& S = s.S;
  std::vector<Vec> gv(K + 1, Vec(n, 0.0)), gs = gv, gk = gv;
  for (std::size_t k = 0; k < K; ++k) {
    const double dt = path.times[k + 1] - path.times[k];
    const auto& A = path.states[k];
    const auto& B = path.states[k + 1];
    for (std::size_t j = 0; j < n; ++j) {
      const double kap = 0.5 * (A.curvature()[j] + B.curvature()[j]);
      if (S.transport_type()) {
        auto phi = [&](double kk) { return 1.0 / S.m(1.0 / kk); };
        const double rate = (B.slope()[j] - A.slope()[j]) / dt;
        const double gsb = 2.0 * h * phi(kap) * rate;
        gs[k + 1][j] += gsb;
        gs[k][j] -= gsb;
        const double gkap = S.tag == StructureTag::W2 ? 0.0 : dt * h * slope_of(phi, kap) * rate * rate;
        gk[k][j] += 0.5 * gkap;
        gk[k + 1][j] += 0.5 * gkap;
      } else {
        const double x = 0.5 * (A.slope()[j] + B.slope()[j]);
        auto psi_k = [&](double kk) { return 1.0 / S.d(x, 1.0 / kk); };
        auto psi_x = [&](double xx) { return 1.0 / S.d(xx, 1.0 / kap); };
        const double vdot = (B[j] - A[j]) / dt;
        const double psi = psi_k(kap);
        const double gvb = 2.0 * h * psi * kap * kap * vdot;
        gv[k + 1][j] += gvb;
        gv[k][j] -= gvb;
        const double gkap = dt * h * (slope_of(psi_k, kap) * kap * kap + 2.0 * psi * kap) * vdot * vdot;
        gk[k][j] += 0.5 * gkap;
        gk[k + 1][j] += 0.5 * gkap;
        const double dpx = S.tag == StructureTag::Crho ? 0.0 : (psi_x(x + 1e-6) - psi_x(x - 1e-6)) / 2e-6;
        const double gx = dt * h * dpx * kap * kap * vdot * vdot;
        gs[k][j] += 0.5 * gx;
        gs[k + 1][j] += 0.5 * gx;
      }
    }
  }
  std::vector<Vec> grad(x.size());
  for (std::size_t k = 1; k < K; ++k) {
    const auto& like = s.base.states[k];
    grad[k - 1] = caches_vjp(like, x[k - 1], gs[k], gk[k]);
    for (std::size_t j = 0; j < n; ++j) grad[k - 1][j] += gv[k][j];
  }
  return grad;
}

Vec total_gradient(const LorenzCurve& like, const Vec& v) {
  const std::size_t n = v.size();
  Vec c(n, 0.0);
  for (std::size_t j = n - 8; j < n; ++j) {
    const double d = 1e-7 * std::max(std::abs(v[j]), 1e-3);
    Vec p = v, m = v;
    p[j] += d;
    m[j] -= d;
    c[j] = (total_of(like, p) - total_of(like, m)) / (2.0 * d);
  }
  return c;
}

double dot(const Vec& a, const Vec& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

MinimizeResult<LorenzPath> minimize_action(const GradientStructure& S, const LorenzPath& init,
                                           const OptimizerOptions& opts) {
  check_times(init.times, init.states.size());
  if (init.states.size() < 3) fail(ErrorKind::InvalidArgument, "need interior time slices");
  LorenzSetup setup{S, init, {}, init.states.front().total()};
  const std::size_t K = init.states.size() - 1;
  std::vector<Vec> x;
  for (std::size_t k = 1; k < K; ++k) {
    x.push_back(init.states[k].values());
    setup.offsets.push_back(correction_of(init.states[k]));
  }
  const bool fixed_total = !S.transport_type();
  // Only interior knots move; the outermost cells carry the tail closures.
  auto hold_edges = [](Vec& v) {
    for (std::size_t j = 0; j < kHeldEdge; ++j) v[j] = v[v.size() - 1 - j] = 0.0;
  };

  Problem p;
  p.objective = [&](const std::vector<Vec>& xs) {
    try {
      return action(S, lorenz_from_vars(setup, xs)).value;
    } catch (const Error&) {
      return kInf;
    }
  };
  p.direction = [&](const std::vector<Vec>& xs) {
    auto g = lorenz_gradient(setup, xs);
    for (std::size_t k = 0; k < g.size(); ++k) {
      hold_edges(g[k]);
      if (fixed_total) {
        auto c = total_gradient(setup.base.states[k + 1], xs[k]);
        hold_edges(c);
        const double s = dot(c, g[k]) / dot(c, c);
        for (std::size_t j = 0; j < c.size(); ++j) g[k][j] -= s * c[j];
      }
      for (auto& v : g[k]) v = -v;
    }
    return g;
  };
  p.project = [&](std::vector<Vec>& xs) {
    for (std::size_t k = 0; k < xs.size(); ++k) {
      auto& v = xs[k];
      const auto& like = setup.base.states[k + 1];
      const double h = like.grid().spacing();
      Vec faces(v.size() - 1);
      bool convex = true;
      for (std::size_t j = 0; j + 1 < v.size(); ++j) {
        faces[j] = (v[j + 1] - v[j]) / h;
        if (j > 0 && faces[j] <= faces[j - 1]) convex = false;
      }
      if (!convex) {
        const auto fit = isotonic_fit(faces);
        for (std::size_t j = 0; j + 1 < v.size(); ++j) v[j + 1] = v[j] + h * fit[j];
      }
      if (fixed_total) {
        for (int it = 0; it < 3; ++it) {
          auto c = total_gradient(like, v);
          hold_edges(c);
          const double s = (setup.total - setup.total_of(k, v)) / dot(c, c);
          for (std::size_t j = 0; j < v.size(); ++j) v[j] += s * c[j];
        }
      }
    }
  };
  auto res = descend(p, std::move(x), opts);
  MinimizeResult<LorenzPath> out;
  out.path = lorenz_from_vars(setup, res.x);
  out.report = action(S, out.path);
  out.history = std::move(res.history);
  out.converged = res.converged;
  return out;
}

namespace {

// ---- density side ------------------------------------------------------------

// Transpose of the node-grid trapezoid running integral.
Vec cumulative_adjoint(const Grid1D& g, const Vec& w) {
  const std::size_t n = w.size();
  Vec suffix(n + 1, 0.0), out(n);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + w[i];
  const double h = g.spacing();
  for (std::size_t m = 0; m < n; ++m) out[m] = 0.5 * h * (suffix[m + 1] + (m >= 1 ? suffix[m] : 0.0));
  return out;
}

Vec moment_weights(const Grid1D& g) {
  const std::size_t n = g.size();
  const double h = g.spacing();
  Vec c(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    c[i] += h / 6.0 * (2.0 * g[i] + g[i + 1]);
    c[i + 1] += h / 6.0 * (g[i] + 2.0 * g[i + 1]);
  }
  return c;
}

}  // namespace

MinimizeResult<DensityPath> minimize_action(const GradientStructure& S, const DensityPath& init,
                                            const OptimizerOptions& opts) {
  check_times(init.times, init.states.size());
  if (init.states.size() < 3) fail(ErrorKind::InvalidArgument, "need interior time slices");
  const auto& g = init.states.front().grid();
  const double floor = init.states.front().floor();
  const std::size_t K = init.states.size() - 1;
  const std::size_t n = g.size();
  const bool transport = S.transport_type();

  std::vector<Vec> constraints{quadrature_weights(g)};
  if (!transport) constraints.push_back(moment_weights(g));

  auto build = [&](const std::vector<Vec>& xs) {
    DensityPath p{init.times, {}};
    p.states.push_back(init.states.front());
    for (const auto& v : xs) p.states.emplace_back(g, v, floor);
    p.states.push_back(init.states.back());
    return p;
  };

  std::vector<Vec> x;
  for (std::size_t k = 1; k < K; ++k) x.push_back(init.states[k].values());

  Problem p;
  p.objective = [&](const std::vector<Vec>& xs) {
    for (const auto& v : xs)
      for (double r : v)
        if (!(r > floor)) return kInf;
    try {
      return action(S, build(xs)).value;
    } catch (const Error&) {
      return kInf;
    }
  };
  p.direction = [&](const std::vector<Vec>& xs) {
    std::vector<Vec> all{init.states.front().values()};
    all.insert(all.end(), xs.begin(), xs.end());
    all.push_back(init.states.back().values());
    std::vector<Vec> grad(K + 1, Vec(n, 0.0));
    const auto w = quadrature_weights(g);
    Vec rate(n), adj(n), grate;
    for (std::size_t k = 0; k < K; ++k) {
      const double dt = init.times[k + 1] - init.times[k];
      const auto& a = all[k];
      const auto& b = all[k + 1];
      for (std::size_t i = 0; i < n; ++i) rate[i] = (b[i] - a[i]) / dt;
      const Vec flux = transport ? cumulative(g, rate) : cumulative(g, cumulative(g, rate));
      Vec gcoef(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double r = 0.5 * (a[i] + b[i]);
        auto coef = [&](double rr) { return transport ? S.m(rr) * rr : S.d(g[i], rr) * rr; };
        const double c = coef(r);
        adj[i] = 2.0 * dt * w[i] * flux[i] / c;
        gcoef[i] = -dt * w[i] * flux[i] * flux[i] / (c * c) * slope_of(coef, r);
      }
      grate = transport ? cumulative_adjoint(g, adj) : cumulative_adjoint(g, cumulative_adjoint(g, adj));
      for (std::size_t i = 0; i < n; ++i) {
        grad[k][i] += -grate[i] / dt + 0.5 * gcoef[i];
        grad[k + 1][i] += grate[i] / dt + 0.5 * gcoef[i];
      }
    }
    // Preconditioned by diag(rho), edges held, and projected onto the
    // constraint tangent space in that metric.
    std::vector<Vec> d(K - 1);
    for (std::size_t k = 1; k < K; ++k) {
      Vec r = all[k];
      for (std::size_t j = 0; j < kHeldEdge; ++j) r[j] = r[n - 1 - j] = 0.0;
      Vec Dg(n);
      for (std::size_t i = 0; i < n; ++i) Dg[i] = r[i] * grad[k][i];
      const std::size_t m = constraints.size();
      double G[2][2] = {{0, 0}, {0, 0}}, rhs[2] = {0, 0};
      for (std::size_t a = 0; a < m; ++a) {
        rhs[a] = dot(constraints[a], Dg);
        for (std::size_t b = 0; b < m; ++b)
          for (std::size_t i = 0; i < n; ++i) G[a][b] += constraints[a][i] * r[i] * constraints[b][i];
      }
      double lam[2] = {0, 0};
      if (m == 1) {
        lam[0] = rhs[0] / G[0][0];
      } else {
        const double det = G[0][0] * G[1][1] - G[0][1] * G[1][0];
        lam[0] = (rhs[0] * G[1][1] - G[0][1] * rhs[1]) / det;
        lam[1] = (G[0][0] * rhs[1] - G[1][0] * rhs[0]) / det;
      }
      d[k - 1].resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        double corr = 0.0;
        for (std::size_t a = 0; a < m; ++a) corr += lam[a] * constraints[a][i];
        d[k - 1][i] = -(Dg[i] - r[i] * corr);
      }
    }
    return d;
  };
  p.project = [](std::vector<Vec>&) {};
  auto res = descend(p, std::move(x), opts);
  MinimizeResult<DensityPath> out;
  out.path = build(res.x);
  out.report = action(S, out.path);
  out.history = std::move(res.history);
  out.converged = res.converged;
  return out;
}

TransferCheck transfer_check(const GradientStructure& S, const DensityPath& path, const Grid1D& fgrid) {
  TransferCheck t;
  t.source_action = action(S, path).value;
  t.transferred_action = action(S, to_lorenz(path, fgrid)).value;
  t.relative_error = std::abs(t.transferred_action - t.source_action) / std::max(t.source_action, 1e-300);
  return t;
}

TransferCheck transfer_check(const GradientStructure& S, const LorenzPath& path, const Grid1D& xgrid) {
  TransferCheck t;
  t.source_action = action(S, path).value;
  t.transferred_action = action(S, to_density(path, xgrid)).value;
  t.relative_error = std::abs(t.transferred_action - t.source_action) / std::max(t.source_action, 1e-300);
  return t;
}

IsometryReport isometry_report(const GradientStructure& S, const Density& rho0, const Density& rho1,
                               std::size_t K, const OptimizerOptions& opts, double tolerance,
                               std::size_t cdf_nodes) {
  if (K < 8) fail(ErrorKind::InvalidArgument, "isometry checks need K >= 8");
  if (!same_grid(rho0.grid(), rho1.grid()))
    fail(ErrorKind::GridMismatch, "endpoints must share a spatial grid");
  if (!S.transport_type() && std::abs(rho0.mean() - rho1.mean()) > 1e-8)
    fail(ErrorKind::ConstraintViolation, "C_D endpoints need equal first moments");
  const auto& xgrid = rho0.grid();
  const auto fgrid = Grid1D::cdf(cdf_nodes ? cdf_nodes : xgrid.size());

  IsometryReport rep;
  rep.structure = S.name();
  rep.tolerance = tolerance;
  const auto geodesic = geodesic_w2(rho0, rho1, K, fgrid);
  if (S.tag == StructureTag::W2) {
    const double w = w2_distance_closed_form(rho0, rho1, fgrid.size());
    rep.w2_closed_form_squared = w * w;
  }
  const auto best_lorenz = minimize_action(S, geodesic, opts);
  auto density_init = to_density(geodesic, xgrid);
  density_init.states.front() = rho0;
  density_init.states.back() = rho1;
  const auto best_density = minimize_action(S, density_init, opts);
  rep.lorenz_action = best_lorenz.report.value;
  rep.density_action = best_density.report.value;
  rep.lorenz_to_density = transfer_check(S, best_lorenz.path, xgrid);
  rep.density_to_lorenz = transfer_check(S, best_density.path, fgrid);
  rep.pass = rep.lorenz_to_density.relative_error <= tolerance &&
             rep.density_to_lorenz.relative_error <= tolerance;
  return rep;
}

}  // namespace lorenzflow
