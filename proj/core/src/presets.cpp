#include "lorenzflow/presets.hpp"

#include <cmath>

#include "lorenzflow/errors.hpp"

namespace lorenzflow {

namespace {

template <class Fn>
Density sample(const Grid1D& x, Fn&& fn) {
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(x[i]);
  return Density(x, std::move(v));
}

}  // namespace

Density uniform_density(const Grid1D& x) {
  return sample(x, [](double) { return 1.0; });
}

Density truncated_gaussian(const Grid1D& x, double mu, double sigma) {
  if (!(sigma > 0.0)) fail(ErrorKind::InvalidArgument, "sigma must be positive");
  return sample(x, [&](double y) { return std::exp(-0.5 * (y - mu) * (y - mu) / (sigma * sigma)); });
}

Density lognormal_like(const Grid1D& x, double mu, double sigma) {
  if (!(sigma > 0.0)) fail(ErrorKind::InvalidArgument, "sigma must be positive");
  if (x.lo() < 0.0) fail(ErrorKind::InvalidArgument, "lognormal-like preset needs x >= 0");
  return sample(x, [&](double y) {
    if (y <= 0.0) return 0.0;
    const double z = (std::log(y) - mu) / sigma;
    return std::exp(-0.5 * z * z) / y;
  });
}

Density translate(const Density& rho, double c) {
  return Density(rho.grid().translated(c), rho.values(), rho.floor());
}

Mobility mobility_preset(const std::string& name, double p) {
  if (name == "one") return {"one", [](double) { return 1.0; }};
  if (name == "rho") return {"rho", [](double r) { return r; }};
  if (name == "saturating") return {"saturating", [](double r) { return 1.0 / (1.0 + r); }};
  if (name == "power") return {"power", [p](double r) { return std::pow(r, p); }};
  fail(ErrorKind::ConfigError, "unknown mobility preset '" + name + "'");
}

Diffusivity diffusivity_preset(const std::string& name, double a) {
  if (name == "one") return {"one", [](double, double) { return 1.0; }};
  if (name == "quadratic") return {"quadratic", [a](double x, double) { return 1.0 + a * x * x; }};
  fail(ErrorKind::ConfigError, "unknown diffusivity preset '" + name + "'");
}

ScalarField quadratic_potential(double s) {
  return {"quadratic", [s](double x) { return s * x * x; }, [s](double x) { return 2.0 * s * x; },
          [s](double) { return 2.0 * s; }};
}

ScalarField quartic_potential(double s) {
  return {"quartic", [s](double x) { return 0.25 * s * x * x * x * x; },
          [s](double x) { return s * x * x * x; }, [s](double x) { return 3.0 * s * x * x; }};
}

Kernel quadratic_kernel(double s) {
  return {"quadratic", [s](double x, double y) { return 0.5 * s * (x - y) * (x - y); },
          [s](double x, double y) { return s * (x - y); }, [s](double, double) { return s; }};
}

Kernel gaussian_kernel(double s, double w) {
  const double w2 = w * w;
  return {"gaussian", [s, w2](double x, double y) { return s * std::exp(-0.5 * (x - y) * (x - y) / w2); },
          [s, w2](double x, double y) { return -s * (x - y) / w2 * std::exp(-0.5 * (x - y) * (x - y) / w2); },
          [s, w2](double x, double y) {
            const double z = (x - y) * (x - y) / w2;
            return s / w2 * (z - 1.0) * std::exp(-0.5 * z);
          }};
}

std::vector<double> random_perturbation(const Grid1D& x, double a, double b, std::mt19937_64& rng,
                                        bool moment_constrained) {
  if (!(b > a)) fail(ErrorKind::InvalidArgument, "perturbation interval is empty");
  const double len = b - a;
  // Bumps are cut to exact zero where they fall below 1e-18.
  auto bump = [](double y, double c, double w) {
    const double z = (y - c) / w;
    return z * z > 41.0 * 2.0 ? 0.0 : std::exp(-0.5 * z * z);
  };
  std::uniform_real_distribution<double> centre(a + 0.3 * len, b - 0.3 * len);
  std::uniform_real_distribution<double> width(0.03 * len, 0.07 * len);
  std::normal_distribution<double> amp(0.0, 1.0);
  const std::size_t n = x.size();
  std::vector<double> h(n, 0.0);
  for (int k = 0; k < 3; ++k) {
    const double c = centre(rng), w = width(rng), A = amp(rng);
    for (std::size_t i = 0; i < n; ++i) h[i] += A * bump(x[i], c, w);
  }
  // Constraint correction from two fixed interior modes.
  const double c0 = 0.5 * (a + b), w0 = 0.06 * len;
  std::vector<double> p1(n), p2(n);
  for (std::size_t i = 0; i < n; ++i) {
    p1[i] = bump(x[i], c0 - 0.1 * len, w0);
    p2[i] = bump(x[i], c0 + 0.1 * len, w0);
  }
  if (!moment_constrained) {
    const double s = integrate(x, h) / integrate(x, p1);
    for (std::size_t i = 0; i < n; ++i) h[i] -= s * p1[i];
    return h;
  }
  const double m11 = integrate(x, p1), m12 = integrate(x, p2);
  const double m21 = first_moment(x, p1), m22 = first_moment(x, p2);
  const double r1 = integrate(x, h), r2 = first_moment(x, h);
  const double det = m11 * m22 - m12 * m21;
  const double s1 = (r1 * m22 - m12 * r2) / det, s2 = (m11 * r2 - m21 * r1) / det;
  for (std::size_t i = 0; i < n; ++i) h[i] -= s1 * p1[i] + s2 * p2[i];
  return h;
}

}  // namespace lorenzflow
