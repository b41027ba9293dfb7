#include "lorenzflow/geometry.hpp"

#include <cmath>
#include <string>

#include "lorenzflow/errors.hpp"

namespace lorenzflow {

std::string_view to_string(StructureTag tag) {
  switch (tag) {
    case StructureTag::W2: return "w2";
    case StructureTag::W2M: return "w2m";
    case StructureTag::Crho: return "crho";
    case StructureTag::CD: return "cd";
  }
  return "unknown";
}

std::string GradientStructure::name() const {
  switch (tag) {
    case StructureTag::W2M: return "w2m(" + mobility.name + ")";
    case StructureTag::CD: return "cd(" + diffusivity.name + ")";
    default: return std::string(to_string(tag));
  }
}

double GradientStructure::m(double rho) const {
  return tag == StructureTag::W2M ? mobility.m(rho) : 1.0;
}

double GradientStructure::d(double x, double rho) const {
  return tag == StructureTag::CD ? diffusivity.d(x, rho) : 1.0;
}

namespace {

double log_mean(double a, double b) {
  const double r = std::log(b / a);
  if (std::abs(r) < 1e-6) return 0.5 * (a + b) * (1.0 - r * r / 24.0);
  return (b - a) / r;
}

void check_positive(double v, const char* what, double at) {
  if (!(v > 0.0) || !std::isfinite(v))
    fail(ErrorKind::InvalidArgument,
         std::string(what) + " must be positive, got " + std::to_string(v) + " at " + std::to_string(at));
}

void require(const FrechetDerivative& u, Side side, const Grid1D& grid) {
  if (u.side != side) fail(ErrorKind::SideMismatch, "covector on the wrong side");
  if (!same_grid(u.grid, grid) || u.values.size() != grid.size())
    fail(ErrorKind::GridMismatch, "covector grid differs from state grid");
}

void require(const TangentVector& v, Side side, const Grid1D& grid) {
  if (v.side != side) fail(ErrorKind::SideMismatch, "tangent on the wrong side");
  if (!same_grid(v.grid, grid) || v.values.size() != grid.size())
    fail(ErrorKind::GridMismatch, "tangent grid differs from state grid");
}

}  // namespace

TangentVector onsager_apply(const GradientStructure& S, const Density& rho, const FrechetDerivative& u,
                            OnsagerDiagnostics* diag) {
  const auto& g = rho.grid();
  require(u, Side::density, g);
  const std::size_t n = g.size();
  const double h = g.spacing();
  const auto vol = quadrature_weights(g);
  const auto& r = rho.values();
  TangentVector out{Side::density, g, std::vector<double>(n, 0.0), !S.transport_type()};
  // Face quantities F_{i+1/2}; out_i = (F_{i+1/2} - F_{i-1/2}) / vol_i.
  std::vector<double> face(n - 1);
  if (S.transport_type()) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double rf = log_mean(r[i], r[i + 1]);
      const double M = S.m(rf) * rf;
      check_positive(M, "mobility", g[i]);
      face[i] = -M * (u.values[i + 1] - u.values[i]) / h;
    }
  } else {
    const auto uxx = second_derivative(g, u.values);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double D = S.d(g[i], r[i]) * r[i];
      check_positive(D, "diffusivity", g[i]);
      w[i] = D * uxx[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) face[i] = (w[i + 1] - w[i]) / h;
    if (diag) diag->moment_leak = w[0] - w[n - 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double right = i + 1 < n ? face[i] : 0.0;
    const double left = i > 0 ? face[i - 1] : 0.0;
    out.values[i] = (right - left) / vol[i];
  }
  return out;
}

TangentVector onsager_apply(const GradientStructure& S, const LorenzCurve& L, const FrechetDerivative& u,
                            OnsagerDiagnostics* diag) {
  const auto& g = L.grid();
  require(u, Side::lorenz, g);
  const std::size_t n = g.size();
  TangentVector out{Side::lorenz, g, std::vector<double>(n), false};
  const auto& k = L.curvature();
  if (S.transport_type()) {
    const auto I = u.antiderivative ? *u.antiderivative : cumulative(g, u.values);
    std::vector<double> flux(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double m = S.m(1.0 / k[j]);
      check_positive(m, "mobility", g[j]);
      flux[j] = m * I[j];
    }
    out.values = cumulative(g, flux);
    for (auto& v : out.values) v = -v;
    if (diag) {
      diag->slope_residual_0 = -(1.5 * flux[0] - 0.5 * flux[1]);
      diag->slope_residual_1 = -(1.5 * flux[n - 1] - 0.5 * flux[n - 2]);
    }
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      const double dt = S.d(L.slope()[j], 1.0 / k[j]);
      check_positive(dt, "diffusivity", g[j]);
      out.values[j] = dt * u.values[j] / (k[j] * k[j]);
    }
  }
  return out;
}

TangentVector grad_density(const GradientStructure& S, const Functional& F, const Density& rho,
                           OnsagerDiagnostics* diag) {
  OnsagerDiagnostics local;
  auto out = onsager_apply(S, rho, frechet(F, rho), &local);
  if (!S.transport_type() && std::abs(local.moment_leak) > kMomentLeakTolerance)
    fail(ErrorKind::MomentDrift, "gradient leaks first moment at rate " + std::to_string(local.moment_leak));
  if (diag) *diag = local;
  return out;
}

TangentVector grad_lorenz(const GradientStructure& S, const Functional& F, const LorenzCurve& L,
                          OnsagerDiagnostics* diag) {
  return onsager_apply(S, L, frechet(F, L), diag);
}

// Discrete adjoint of onsager_apply: with face fluxes J_{i+1/2} = sum_{k<=i}
// vol_k a_k (and, for the fourth-order structures, node potentials H with
// H_{i+1} - H_i = h J_{i+1/2}, H_0 = 0), summation by parts gives
// <K u, b> = sum_i vol_i u_i b_i exactly for tangents b.
double metric_pairing(const GradientStructure& S, const Density& rho, const TangentVector& a,
                      const TangentVector& b) {
  const auto& g = rho.grid();
  require(a, Side::density, g);
  require(b, Side::density, g);
  const std::size_t n = g.size();
  const double h = g.spacing();
  const auto vol = quadrature_weights(g);
  const auto& r = rho.values();
  auto faces = [&](const std::vector<double>& v) {
    std::vector<double> J(n - 1);
    double run = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) J[i] = run += vol[i] * v[i];
    return J;
  };
  const auto Ja = faces(a.values), Jb = faces(b.values);
  double s = 0.0;
  if (S.transport_type()) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double rf = log_mean(r[i], r[i + 1]);
      s += h * Ja[i] * Jb[i] / (S.m(rf) * rf);
    }
  } else {
    double Ha = 0.0, Hb = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      Ha += h * Ja[i - 1];
      Hb += h * Jb[i - 1];
      s += h * Ha * Hb / (S.d(g[i], r[i]) * r[i]);
    }
  }
  return s;
}

double metric_pairing(const GradientStructure& S, const LorenzCurve& L, const TangentVector& a,
                      const TangentVector& b) {
  const auto& g = L.grid();
  require(a, Side::lorenz, g);
  require(b, Side::lorenz, g);
  const auto& k = L.curvature();
  std::vector<double> integrand(g.size());
  if (S.transport_type()) {
    const auto da = derivative(g, a.values), db = derivative(g, b.values);
    for (std::size_t j = 0; j < g.size(); ++j) integrand[j] = da[j] * db[j] / S.m(1.0 / k[j]);
  } else {
    for (std::size_t j = 0; j < g.size(); ++j)
      integrand[j] = k[j] * k[j] * a.values[j] * b.values[j] / S.d(L.slope()[j], 1.0 / k[j]);
  }
  return integrate(g, integrand);
}

}  // namespace lorenzflow
