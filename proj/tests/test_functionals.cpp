#include <doctest.h>

#include <cmath>
#include <random>

#include <lorenzflow/lorenzflow.hpp>

#include "oracles.hpp"

using namespace lorenzflow;

namespace {

const oracle::TruncatedNormal kGauss{0.3, 0.9, -3.0, 3.0};

Density gauss(std::size_t n = 256) {
  return truncated_gaussian(Grid1D::nodes(kGauss.a, kGauss.b, n), kGauss.mu, kGauss.sigma);
}

std::vector<Functional> density_functionals() {
  return {Functional::potential(quadratic_potential()), Functional::interaction(gaussian_kernel(1.0, 0.7)),
          Functional::entropy(), Functional::gini_area(),
          Functional::combination({{1.0, Functional::entropy()}, {0.5, Functional::potential(quartic_potential())}})};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("entropy of a uniform density") {
  const auto rho = uniform_density(Grid1D::nodes(0.0, 2.0, 64));
  const auto L = lorenz_map(rho, Grid1D::cdf(64));
  CHECK(eval(Functional::entropy(), rho) == doctest::Approx(-std::log(2.0)).epsilon(1e-13));
  CHECK(eval(Functional::entropy(Side::lorenz), L) == doctest::Approx(-std::log(2.0)).epsilon(1e-13));
  const auto d = frechet(Functional::entropy(), rho);
  for (double v : d.values) CHECK(v == doctest::Approx(std::log(0.5) + 1.0).epsilon(1e-13));
  CHECK(oracle::max_abs(gauge_project(rho.grid(), d.values, Gauge::modulo_constant)) < 1e-13);
}

TEST_CASE("gini area of the diagonal and of f^2") {
  const auto fg = Grid1D::cdf(256);
  std::vector<double> diag(fg.size()), ones(fg.size(), 1.0), flat(fg.size(), kCurvatureFloor);
  for (std::size_t j = 0; j < fg.size(); ++j) diag[j] = fg[j];
  const LorenzCurve equal(fg, diag, ones, flat, 1.0, {1.0, 1.0}, {});
  CHECK(std::abs(eval(Functional::gini_area(Side::lorenz), equal)) < 1e-14);

  const auto L = lorenz_map(uniform_density(Grid1D::nodes(0.0, 2.0, 256)), fg);
  const double expected = oracle::simpson([](double f) { return f - f * f; }, 0.0, 1.0);
  CHECK(eval(Functional::gini_area(Side::lorenz), L) == doctest::Approx(expected).epsilon(1e-4));
  CHECK(eval(Functional::gini_area(Side::lorenz), L) <= 0.5 * L.total());

  const auto dG = frechet(Functional::gini_area(Side::lorenz), L);
  for (double v : dG.values) CHECK(v == -1.0);
}

TEST_CASE("potential energy matches quadrature oracle") {
  const auto rho = gauss();
  const double second = oracle::simpson([](double x) { return x * x * kGauss.pdf(x); }, kGauss.a, kGauss.b);
  CHECK(rel(eval(Functional::potential(quadratic_potential()), rho), second) < 1e-4);
}

TEST_CASE("twins evaluate to the same value") {
  const auto rho = gauss();
  const auto L = lorenz_map(rho, Grid1D::cdf(256));
  for (const auto& F : density_functionals()) {
    INFO(F.name());
    CHECK(F.twin().side() == Side::lorenz);
    CHECK(F.twin().twin().side() == Side::density);
    CHECK(rel(eval(F.twin(), L), eval(F, rho)) < 1e-4);
  }
}

TEST_CASE("side and symmetry checks") {
  const auto rho = gauss(64);
  const auto L = lorenz_map(rho, Grid1D::cdf(64));
  try {
    eval(Functional::entropy(Side::lorenz), rho);
    FAIL("expected SideMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SideMismatch);
  }
  CHECK_THROWS_AS(frechet(Functional::entropy(), L), Error);
  Kernel skew{"skew", [](double x, double y) { return x - 2.0 * y; }, [](double, double) { return 1.0; }};
  CHECK_THROWS_AS(Functional::interaction(skew), Error);
}

TEST_CASE("density-side derivatives match central differences") {
  const auto rho = gauss();
  const auto& g = rho.grid();
  std::mt19937_64 rng(11);
  const double eps = 1e-4;
  for (const auto& F : density_functionals()) {
    INFO(F.name());
    const auto dF = frechet(F, rho);
    const auto w = quadrature_weights(g);
    double err = 0.0, scale = 0.0;
    for (int k = 0; k < 10; ++k) {
      const auto h = random_perturbation(g, -2.0, 2.0, rng, false);
      std::vector<double> up(g.size()), dn(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) {
        up[i] = rho[i] + eps * h[i];
        dn[i] = rho[i] - eps * h[i];
      }
      const double fd = (eval(F, Density(g, up)) - eval(F, Density(g, dn))) / (2.0 * eps);
      double pair = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) pair += w[i] * dF.values[i] * h[i];
      err = std::max(err, std::abs(pair - fd));
      scale = std::max(scale, std::abs(fd));
    }
    CHECK(err / scale < (F.kind() == FunctionalKind::potential ? 1e-4 : 1e-3));
  }
}

TEST_CASE("Lorenz-side derivatives match central differences") {
  // Moment-constrained interior tangents make eta vanish with its slope at
  // both ends, so the pairing needs no boundary terms.
  const auto rho = gauss();
  const auto& g = rho.grid();
  const auto fg = Grid1D::cdf(256);
  const auto L = lorenz_map(rho, fg);
  std::mt19937_64 rng(12);
  const double eps = 1e-4;
  for (const auto& F : density_functionals()) {
    const auto Ft = F.twin();
    INFO(Ft.name());
    const auto dF = frechet(Ft, L);
    REQUIRE(dF.antiderivative);
    double err = 0.0, scale = 0.0;
    for (int k = 0; k < 10; ++k) {
      const auto h = random_perturbation(g, -2.0, 2.0, rng, true);
      std::vector<double> up(g.size()), dn(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) {
        up[i] = rho[i] + eps * h[i];
        dn[i] = rho[i] - eps * h[i];
      }
      const double fd =
          (eval(Ft, lorenz_map(Density(g, up), fg)) - eval(Ft, lorenz_map(Density(g, dn), fg))) / (2.0 * eps);
      const auto eta = dt_lorenz(rho, h, fg);
      double pair = 0.0;
      for (std::size_t j = 0; j < fg.size(); ++j) pair += fg.spacing() * dF.values[j] * eta.values[j];
      err = std::max(err, std::abs(pair - fd));
      scale = std::max(scale, std::abs(fd));
    }
    CHECK(err / scale < 1e-3);
  }
}

TEST_CASE("change of variables for derivatives") {
  const auto rho = gauss();
  const auto& g = rho.grid();
  const auto L = lorenz_map(rho, Grid1D::cdf(256));

  SUBCASE("zero maps to zero") {
    FrechetDerivative zero{Side::lorenz, L.grid(), std::vector<double>(L.size(), 0.0), Gauge::absolute, {}};
    CHECK(oracle::max_abs(cov_frechet(zero, rho).values) == 0.0);
  }

  SUBCASE("quadratic potential twin recovers x^2") {
    const auto dFt = frechet(Functional::potential(quadratic_potential(), Side::lorenz), L);
    for (std::size_t j = 0; j < L.size(); ++j)
      CHECK(dFt.values[j] == doctest::Approx(-2.0 * L.curvature()[j]).epsilon(1e-14));
    const auto back = cov_frechet(dFt, rho);
    std::vector<double> x2(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) x2[i] = g[i] * g[i];
    const auto a = gauge_project(g, back.values, Gauge::modulo_constant);
    const auto b = gauge_project(g, x2, Gauge::modulo_constant);
    CHECK(oracle::max_abs_diff(a, b) / oracle::max_abs(b) < 1e-3);
  }

  SUBCASE("x-form and f-form agree") {
    for (const auto& F : density_functionals()) {
      INFO(F.name());
      const auto dFt = frechet(F.twin(), L);
      const auto xform = cov_frechet(dFt, rho);
      const auto fform = cov_frechet_fform(dFt, L);
      double err = 0.0;
      for (std::size_t j = 0; j < L.size(); ++j)
        err = std::max(err, std::abs(oracle::cubic_interpolate(g.lo(), g.spacing(), xform.values, L.slope()[j]) -
                                     fform[j]));
      CHECK(err < 1e-4);
    }
  }

  SUBCASE("every twin pair maps back") {
    // Compared where the cdf grid samples x; beyond G(f_0) and G(f_n-1) the
    // Lorenz-side derivative only fixes the density side by extrapolation.
    std::vector<double> xs, w;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g[i] >= L.slope().front() && g[i] <= L.slope().back()) {
        idx.push_back(i);
        xs.push_back(g[i]);
        w.push_back(g.spacing());
      }
    for (const auto& F : density_functionals()) {
      INFO(F.name());
      const Gauge gauge = Gauge::modulo_constant;
      const auto full_a = cov_frechet(frechet(F.twin(), L), rho).values;
      const auto full_b = frechet(F, rho).values;
      std::vector<double> a, b;
      for (auto i : idx) {
        a.push_back(full_a[i]);
        b.push_back(full_b[i]);
      }
      a = gauge_project(xs, a, w, gauge);
      b = gauge_project(xs, b, w, gauge);
      CHECK(oracle::max_abs_diff(a, b) / oracle::max_abs(b) < 1e-3);
    }
  }

  SUBCASE("grid errors") {
    FrechetDerivative bad{Side::lorenz, Grid1D::nodes(0.0, 1.0, 16), std::vector<double>(16), Gauge::absolute, {}};
    try {
      cov_frechet(bad, rho);
      FAIL("expected GridMismatch");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::GridMismatch);
    }
  }
}

TEST_CASE("gauge projection") {
  const auto g = Grid1D::nodes(-1.0, 2.0, 64);
  std::vector<double> affine(g.size()), quad(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    affine[i] = 3.0 - 2.0 * g[i];
    quad[i] = g[i] * g[i] + affine[i];
  }
  CHECK(oracle::max_abs(gauge_project(g, affine, Gauge::modulo_affine)) < 1e-12);
  std::vector<double> x2(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) x2[i] = g[i] * g[i];
  CHECK(oracle::max_abs_diff(gauge_project(g, quad, Gauge::modulo_affine), gauge_project(g, x2, Gauge::modulo_affine)) <
        1e-12);
  CHECK(gauge_project(g, affine, Gauge::absolute) == affine);
}
