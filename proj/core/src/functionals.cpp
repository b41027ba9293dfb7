#include "lorenzflow/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "lorenzflow/errors.hpp"
#include "lorenzflow/transforms.hpp"

namespace lorenzflow {

std::string_view to_string(FunctionalKind kind) {
  switch (kind) {
    case FunctionalKind::potential: return "potential";
    case FunctionalKind::interaction: return "interaction";
    case FunctionalKind::boltzmann_entropy: return "boltzmann_entropy";
    case FunctionalKind::gini_area: return "gini_area";
    case FunctionalKind::linear_combination: return "linear_combination";
  }
  return "unknown";
}

std::string_view to_string(Gauge gauge) {
  switch (gauge) {
    case Gauge::modulo_constant: return "modulo_constant";
    case Gauge::modulo_affine: return "modulo_affine";
    case Gauge::absolute: return "absolute";
  }
  return "unknown";
}

Functional Functional::potential(ScalarField V, Side side) {
  if (!V.value || !V.derivative) fail(ErrorKind::InvalidArgument, "potential needs V and V'");
  Functional F(FunctionalKind::potential, side);
  F.field_ = std::make_shared<const ScalarField>(std::move(V));
  return F;
}

Functional Functional::interaction(Kernel W, Side side) {
  if (!W.value || !W.d1) fail(ErrorKind::InvalidArgument, "interaction needs W and its x-derivative");
  const double probes[][2] = {{-1.3, 0.4}, {0.25, 2.0}, {-0.7, -0.1}, {3.0, -2.5}};
  for (const auto& p : probes) {
    const double a = W.value(p[0], p[1]), b = W.value(p[1], p[0]);
    if (std::abs(a - b) > 1e-12 * (1.0 + std::abs(a)))
      fail(ErrorKind::InvalidArgument, "interaction kernel '" + W.name + "' is not symmetric");
  }
  Functional F(FunctionalKind::interaction, side);
  F.kernel_ = std::make_shared<const Kernel>(std::move(W));
  return F;
}

Functional Functional::entropy(Side side) { return Functional(FunctionalKind::boltzmann_entropy, side); }
Functional Functional::gini_area(Side side) { return Functional(FunctionalKind::gini_area, side); }

Functional Functional::combination(std::vector<FunctionalTerm> terms) {
  if (terms.empty()) fail(ErrorKind::InvalidArgument, "empty combination");
  const Side side = terms.front().functional.side();
  for (const auto& t : terms)
    if (t.functional.side() != side) fail(ErrorKind::SideMismatch, "combination mixes sides");
  Functional F(FunctionalKind::linear_combination, side);
  F.terms_ = std::move(terms);
  return F;
}

Functional Functional::twin() const {
  Functional F = *this;
  F.side_ = side_ == Side::density ? Side::lorenz : Side::density;
  for (auto& t : F.terms_) t.functional = t.functional.twin();
  return F;
}

std::string Functional::name() const {
  switch (kind_) {
    case FunctionalKind::potential: return "potential(" + field_->name + ")";
    case FunctionalKind::interaction: return "interaction(" + kernel_->name + ")";
    case FunctionalKind::linear_combination: {
      std::string s;
      for (const auto& t : terms_) s += (s.empty() ? "" : "+") + t.functional.name();
      return s;
    }
    default: return std::string(to_string(kind_));
  }
}

namespace {

void require_side(const Functional& F, Side side) {
  if (F.side() != side)
    fail(ErrorKind::SideMismatch, "functional " + F.name() + " lives on the " +
                                      std::string(to_string(F.side())) + " side");
}

double gini_of(const LorenzCurve& L) {
  double s = 0.0;
  for (double v : L.values()) s += v;
  return 0.5 * L.total() - L.grid().spacing() * s;
}

// Both sides integrate the same objects: the piecewise-linear rho here, its
// exact transform there.
double eval_quadrature(const Functional& F, const Quadrature& Q) {
  const std::size_t m = Q.x.size();
  double s = 0.0;
  switch (F.kind()) {
    case FunctionalKind::potential:
      for (std::size_t q = 0; q < m; ++q) s += Q.weight[q] * F.field().value(Q.x[q]);
      return s;
    case FunctionalKind::interaction:
      for (std::size_t q = 0; q < m; ++q) {
        double inner = 0.0;
        for (std::size_t r = 0; r < m; ++r) inner += Q.weight[r] * F.kernel().value(Q.x[q], Q.x[r]);
        s += Q.weight[q] * inner;
      }
      return 0.5 * s;
    case FunctionalKind::boltzmann_entropy:
      for (std::size_t q = 0; q < m; ++q) s += Q.weight[q] * std::log(Q.density[q]);
      return s;
    default: break;
  }
  return 0.0;
}

double second_of(const ScalarField& V, double x) {
  if (V.second) return V.second(x);
  const double e = 1e-5 * std::max(1.0, std::abs(x));
  return (V.derivative(x + e) - V.derivative(x - e)) / (2.0 * e);
}

double d11_of(const Kernel& W, double x, double y) {
  if (W.d11) return W.d11(x, y);
  const double e = 1e-5 * std::max(1.0, std::abs(x));
  return (W.d1(x + e, y) - W.d1(x - e, y)) / (2.0 * e);
}

}  // namespace

double eval(const Functional& F, const Density& rho) {
  require_side(F, Side::density);
  switch (F.kind()) {
    case FunctionalKind::gini_area: return gini_of(lorenz_map(rho, Grid1D::cdf(rho.size())));
    case FunctionalKind::linear_combination: {
      double s = 0.0;
      for (const auto& t : F.terms()) s += t.weight * eval(t.functional, rho);
      return s;
    }
    default: return eval_quadrature(F, density_quadrature(rho));
  }
}

// Lorenz-side integrals int phi(L_f) df use the quadrature of the Hermite
// reconstruction: the midpoint rule in f is poor where f-samples are sparse
// in x (the tails).
double eval(const Functional& F, const LorenzCurve& L) {
  require_side(F, Side::lorenz);
  switch (F.kind()) {
    case FunctionalKind::gini_area: return gini_of(L);
    case FunctionalKind::linear_combination: {
      double s = 0.0;
      for (const auto& t : F.terms()) s += t.weight * eval(t.functional, L);
      return s;
    }
    default: return eval_quadrature(F, lorenz_quadrature(L));
  }
}

FrechetDerivative frechet(const Functional& F, const Density& rho) {
  require_side(F, Side::density);
  const auto& g = rho.grid();
  const auto& r = rho.values();
  FrechetDerivative d{Side::density, g, std::vector<double>(r.size()), Gauge::modulo_constant, {}};
  switch (F.kind()) {
    case FunctionalKind::potential:
      for (std::size_t i = 0; i < r.size(); ++i) d.values[i] = F.field().value(g[i]);
      break;
    case FunctionalKind::interaction: {
      const auto w = quadrature_weights(g);
      for (std::size_t i = 0; i < r.size(); ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k) s += w[k] * F.kernel().value(g[i], g[k]) * r[k];
        d.values[i] = s;
      }
      break;
    }
    case FunctionalKind::boltzmann_entropy:
      for (std::size_t i = 0; i < r.size(); ++i) d.values[i] = std::log(r[i]) + 1.0;
      break;
    case FunctionalKind::gini_area: {
      // L(1)/2 - int L varies as x/2 - int^x (1 - C): int^x C - x/2, with the
      // piecewise-quadratic cdf integrated exactly per cell.
      const auto C = cdf(rho).values;
      const double h = g.spacing();
      double acc = 0.0;
      d.values[0] = -0.5 * g[0];
      for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        acc += 0.5 * h * (C[i] + C[i + 1]) - h * h * (r[i + 1] - r[i]) / 12.0;
        d.values[i + 1] = acc - 0.5 * g[i + 1];
      }
      break;
    }
    case FunctionalKind::linear_combination:
      for (const auto& t : F.terms()) {
        const auto part = frechet(t.functional, rho);
        for (std::size_t i = 0; i < r.size(); ++i) d.values[i] += t.weight * part.values[i];
      }
      break;
  }
  return d;
}

FrechetDerivative frechet(const Functional& F, const LorenzCurve& L) {
  require_side(F, Side::lorenz);
  const auto& g = L.grid();
  const auto& G = L.slope();
  const std::size_t n = L.size();
  FrechetDerivative d{Side::lorenz, g, std::vector<double>(n), Gauge::absolute, {}};
  std::vector<double> I(n);
  switch (F.kind()) {
    // values = I' by the chain rule through the exact cache G' = L_ff.
    case FunctionalKind::potential:
      for (std::size_t j = 0; j < n; ++j) {
        I[j] = -F.field().derivative(G[j]);
        d.values[j] = -second_of(F.field(), G[j]) * L.curvature()[j];
      }
      break;
    case FunctionalKind::interaction: {
      const auto Q = lorenz_quadrature(L);
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0, s11 = 0.0;
        for (std::size_t q = 0; q < Q.x.size(); ++q) {
          s += Q.weight[q] * F.kernel().d1(G[j], Q.x[q]);
          s11 += Q.weight[q] * d11_of(F.kernel(), G[j], Q.x[q]);
        }
        I[j] = -s;
        d.values[j] = -s11 * L.curvature()[j];
      }
      break;
    }
    case FunctionalKind::boltzmann_entropy: {
      // 1/L_ff = rho(G), so I = -d/df (1/L_ff) = -(log rho)'(G) and
      // I' = -(log rho)''(G) L_ff; x-derivatives on the nodes G_j.
      std::vector<double> logq(n);
      for (std::size_t j = 0; j < n; ++j) logq[j] = -std::log(L.curvature()[j]);
      const auto d1 = derivative(G, logq), d2 = second_derivative(G, logq);
      for (std::size_t j = 0; j < n; ++j) {
        I[j] = -d1[j];
        d.values[j] = -d2[j] * L.curvature()[j];
      }
      break;
    }
    case FunctionalKind::gini_area:
      // I = 1/2 - f: -int I eta' = eta(1)/2 - int eta, the variation of
      // L(1)/2 - int L including the mean.
      for (std::size_t j = 0; j < n; ++j) {
        I[j] = 0.5 - g[j];
        d.values[j] = -1.0;
      }
      break;
    case FunctionalKind::linear_combination:
      std::fill(I.begin(), I.end(), 0.0);
      for (const auto& t : F.terms()) {
        const auto part = frechet(t.functional, L);
        for (std::size_t j = 0; j < n; ++j) {
          d.values[j] += t.weight * part.values[j];
          I[j] += t.weight * (*part.antiderivative)[j];
        }
      }
      break;
  }
  d.antiderivative = std::move(I);
  return d;
}

namespace {

void require_lorenz_covector(const FrechetDerivative& dF) {
  if (dF.side != Side::lorenz) fail(ErrorKind::SideMismatch, "expected a Lorenz-side derivative");
  const auto& g = dF.grid;
  if (!g.is_centered() || g.lo() != 0.0 || g.hi() != 1.0 || dF.values.size() != g.size())
    fail(ErrorKind::GridMismatch, "Lorenz derivative must live on a cdf grid");
}

std::vector<double> antiderivative_of(const FrechetDerivative& dF) {
  if (dF.antiderivative) return *dF.antiderivative;
  return cumulative(dF.grid, dF.values);
}

}  // namespace

namespace {

// I read as a function of x through the nodes (G_j, I_j) with slopes
// dI/dx = I'(f) / L_ff(f): cubic Hermite between nodes, linear beyond.
class XProfile {
 public:
  XProfile(std::vector<double> G, std::vector<double> I, std::vector<double> slope)
      : G_(std::move(G)), I_(std::move(I)), s_(std::move(slope)) {}

  double operator()(double x) const {
    const std::size_t n = G_.size();
    if (x <= G_[0]) return I_[0] + s_[0] * (x - G_[0]);
    if (x >= G_[n - 1]) return I_[n - 1] + s_[n - 1] * (x - G_[n - 1]);
    const std::size_t j =
        std::min(static_cast<std::size_t>(std::upper_bound(G_.begin(), G_.end(), x) - G_.begin()) - 1, n - 2);
    const double h = G_[j + 1] - G_[j], t = (x - G_[j]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * I_[j] + (t3 - 2 * t2 + t) * h * s_[j] + (-2 * t3 + 3 * t2) * I_[j + 1] +
           (t3 - t2) * h * s_[j + 1];
  }

  // int of the Hermite cubic over [G_j, G_j+1].
  double cell_integral(std::size_t j) const {
    const double h = G_[j + 1] - G_[j];
    return 0.5 * h * (I_[j] + I_[j + 1]) + h * h * (s_[j] - s_[j + 1]) / 12.0;
  }

  const std::vector<double>& nodes() const { return G_; }

 private:
  std::vector<double> G_, I_, s_;
};

XProfile x_profile(const FrechetDerivative& dF, std::vector<double> G, const std::vector<double>& curvature) {
  const std::size_t n = G.size();
  std::vector<double> slope(n);
  for (std::size_t j = 0; j < n; ++j) slope[j] = dF.values[j] / curvature[j];
  return XProfile(std::move(G), antiderivative_of(dF), std::move(slope));
}

}  // namespace

// The inner integral int^y rho dF(C) is I(C(y)), read in x (smooth where
// I(f) is steep, i.e. in the tails).
FrechetDerivative cov_frechet(const FrechetDerivative& dF, const Density& rho) {
  require_lorenz_covector(dF);
  const auto& x = rho.grid();
  const auto L = lorenz_map(rho, dF.grid);
  const auto P = x_profile(dF, L.slope(), L.curvature());
  // Outer integral by Simpson per cell.
  const double h = x.spacing();
  std::vector<double> outer(x.size(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    outer[i + 1] = outer[i] - h / 6.0 * (P(x[i]) + 4.0 * P(x[i] + 0.5 * h) + P(x[i + 1]));
  return {Side::density, x, std::move(outer), Gauge::modulo_constant, {}};
}

// int L_ff I df over [f_j, f_j+1] is int I dx over [G_j, G_j+1], taken on
// the exact increments of G, starting from the support edge at f = 0.
std::vector<double> cov_frechet_fform(const FrechetDerivative& dF, const LorenzCurve& L) {
  require_lorenz_covector(dF);
  if (!same_grid(dF.grid, L.grid())) fail(ErrorKind::GridMismatch, "derivative and curve grids differ");
  const auto P = x_profile(dF, L.slope(), L.curvature());
  const auto& G = L.slope();
  const std::size_t n = G.size();
  std::vector<double> out(n);
  out[0] = -0.5 * (G[0] - L.support().lo) * (P(L.support().lo) + P(G[0]));
  for (std::size_t j = 0; j + 1 < n; ++j) out[j + 1] = out[j] - P.cell_integral(j);
  return out;
}

std::vector<double> gauge_project(const std::vector<double>& xs, const std::vector<double>& v,
                                  const std::vector<double>& w, Gauge gauge) {
  std::vector<double> out = v;
  if (gauge == Gauge::absolute) return out;
  double sw = 0, sx = 0, sv = 0, sxx = 0, sxv = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    sw += w[i];
    sx += w[i] * xs[i];
    sv += w[i] * v[i];
    sxx += w[i] * xs[i] * xs[i];
    sxv += w[i] * xs[i] * v[i];
  }
  double a = sv / sw, b = 0.0;
  if (gauge == Gauge::modulo_affine) {
    const double xm = sx / sw;
    b = (sxv - xm * sv) / (sxx - xm * sx);
    a = sv / sw - b * xm;
  }
  for (std::size_t i = 0; i < v.size(); ++i) out[i] -= a + b * xs[i];
  return out;
}

std::vector<double> gauge_project(const Grid1D& g, const std::vector<double>& v, Gauge gauge) {
  return gauge_project(g.points(), v, quadrature_weights(g), gauge);
}

}  // namespace lorenzflow
