#include <doctest.h>

#include <cmath>

#include <lorenzflow/lorenzflow.hpp>

#include "oracles.hpp"

using namespace lorenzflow;

namespace {

Dynamics heat() {
  Dynamics d;
  d.name = "heat";
  return d;
}

Dynamics ornstein_uhlenbeck() {
  Dynamics d;
  d.name = "ou";
  d.drift = [](double x, double, double, const FieldMoments&) { return -x; };
  return d;
}

// Trapezoid moments on the nodes, independent of the library's quadrature.
double variance(const Density& rho) {
  const auto& g = rho.grid();
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double w = (i == 0 || i + 1 == rho.size()) ? 0.5 : 1.0;
    m0 += w * rho[i];
    m1 += w * rho[i] * g[i];
    m2 += w * rho[i] * g[i] * g[i];
  }
  const double mean = m1 / m0;
  return m2 / m0 - mean * mean;
}

LorenzCurve parabola(std::size_t n) { return lorenz_map(uniform_density(Grid1D::nodes(0.0, 2.0, n)), Grid1D::cdf(n)); }

LorenzCurve resampled(const LorenzCurve& L) {
  return LorenzCurve::from_values(L.grid(), L.values(), L.support(), L.closure());
}

}  // namespace

TEST_CASE("mvfpe step conserves mass and leaves a plateau alone") {
  const auto g = Grid1D::nodes(-4.0, 4.0, 161);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::abs(g[i]) < 2.0 ? 1.0 : 0.5 + 0.25 * std::abs(g[i]);
  const Density rho(g, v);
  const double dt = 0.1 * g.spacing() * g.spacing();
  const auto next = step_mvfpe(rho, heat(), 0.0, dt);
  CHECK(std::abs(next.raw_mass() - 1.0) < 1e-12);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::abs(g[i]) < 1.5) CHECK(next[i] == doctest::Approx(rho[i]).epsilon(1e-14));

  Dynamics dyn = ornstein_uhlenbeck();
  dyn.diffusion = [](double x, double, double, const FieldMoments&) { return 1.0 + 0.3 * std::sin(x); };
  auto cur = truncated_gaussian(g, 0.5, 0.8);
  for (int k = 0; k < 20; ++k) {
    const auto nxt = step_mvfpe(cur, dyn, k * dt, dt);
    CHECK(std::abs(nxt.raw_mass() - 1.0) < 1e-12);
    cur = nxt;
  }
}

TEST_CASE("heat flow grows the variance by 2t") {
  const auto rho0 = truncated_gaussian(Grid1D::nodes(-5.0, 5.0, 256), 0.0, 0.5);
  EvolutionSpec spec;
  spec.kind = RhsKind::mvfpe;
  spec.dynamics = heat();
  spec.dt = 1e-4;
  spec.t_end = 0.05;
  spec.stride = 100;
  const auto traj = run(spec, rho0);
  REQUIRE(traj.times.size() == 6);
  CHECK(traj.times.back() == doctest::Approx(0.05));
  const double v0 = variance(rho0);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double expected = v0 + 2.0 * traj.times[k];
    CHECK(std::abs(variance(traj.states[k]) - expected) / expected < 1e-3);
  }
}

TEST_CASE("standard Gaussian is stationary under Ornstein-Uhlenbeck") {
  const auto rho = truncated_gaussian(Grid1D::nodes(-5.0, 5.0, 200), 0.0, 1.0);
  EvolutionSpec spec;
  spec.kind = RhsKind::mvfpe;
  spec.dynamics = ornstein_uhlenbeck();
  spec.dt = 1e-4;
  spec.t_end = 0.02;
  spec.stride = 200;
  const auto traj = run(spec, rho);
  const double drift = oracle::max_abs_diff(traj.states.back().values(), rho.values()) / spec.t_end;
  CHECK(drift < 1e-6);
}

TEST_CASE("Lorenz PDE step") {
  const auto L = parabola(64);
  SUBCASE("zero dynamics is the identity") {
    Dynamics none;
    none.diffusion = [](double, double, double, const FieldMoments&) { return 0.0; };
    const auto next = step_lorenz_pde(L, none, 0.0, 1e-5);
    CHECK(oracle::max_abs_diff(next.values(), L.values()) == 0.0);
  }
  SUBCASE("unit diffusion moves f^2 down at rate 1/2") {
    const double dt = 1e-6;
    const auto next = step_lorenz_pde(L, heat(), 0.0, dt);
    for (std::size_t j = 0; j < L.size(); ++j) CHECK((next[j] - L[j]) / dt == doctest::Approx(-0.5).epsilon(1e-6));
  }
  SUBCASE("oversized step is refused") {
    CHECK_THROWS_AS(step_lorenz_pde(L, heat(), 0.0, 1.0), Error);
    try {
      step_lorenz_pde(L, heat(), 0.0, 1.0);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::StabilityViolation);
    }
  }
}

TEST_CASE("Ornstein-Uhlenbeck twins agree across sides") {
  const std::size_t n = 128;
  const auto rho = truncated_gaussian(Grid1D::nodes(-5.0, 5.0, n), 0.6, 0.7);
  const auto L = resampled(lorenz_map(rho, Grid1D::cdf(n)));
  EvolutionSpec sd;
  sd.kind = RhsKind::mvfpe;
  sd.dynamics = ornstein_uhlenbeck();
  sd.dt = 2e-5;
  sd.t_end = 0.02;
  sd.stride = 250;
  EvolutionSpec sl = sd;
  sl.side = Side::lorenz;
  sl.kind = RhsKind::lorenz_pde;  // same coefficients, evaluated at x = L_f
  const auto rep = equivalence_report(run(sd, rho), run(sl, L), 5e-3);
  MESSAGE("OU twin max sup error " << rep.max_sup);
  CHECK(rep.rows.size() == 5);
  CHECK(rep.pass);

  // Using D rho in place of D is a different flow and must be told apart.
  sl.dynamics.diffusion = [](double, double, double r, const FieldMoments&) { return r; };
  CHECK(equivalence_report(run(sd, rho), run(sl, L), 5e-3).max_sup > 10.0 * rep.max_sup);
}

TEST_CASE("W2 entropy descent is the heat stencil") {
  const auto rho = truncated_gaussian(Grid1D::nodes(-4.0, 4.0, 128), 0.3, 0.8);
  const double dt = 2e-4;
  EvolutionSpec grad;
  grad.structure = GradientStructure::W2();
  grad.functional = Functional::entropy();
  grad.dt = dt;
  grad.t_end = 10 * dt;
  EvolutionSpec fp = grad;
  fp.kind = RhsKind::mvfpe;
  fp.dynamics = heat();
  fp.functional.reset();
  const auto a = run(grad, rho), b = run(fp, rho);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t k = 1; k < a.states.size(); ++k)
    CHECK(oracle::max_abs_diff(a.states[k].values(), b.states[k].values()) < 1e-10 * k);
  // Entropy decreases along descent.
  for (std::size_t k = 1; k < a.steps.size(); ++k) CHECK(a.steps[k].functional <= a.steps[k - 1].functional + 1e-10);
}

TEST_CASE("Gini ascent in CD from f^2") {
  const auto L = parabola(64);
  EvolutionSpec spec;
  spec.side = Side::lorenz;
  spec.structure = GradientStructure::CD({});
  spec.functional = Functional::gini_area(Side::lorenz);
  spec.direction = Direction::ascent;
  spec.dt = 2e-6;
  spec.t_end = 2e-3;
  spec.stride = 100;
  const auto traj = run(spec, L);
  REQUIRE(traj.tracks_functional);
  for (std::size_t k = 1; k < traj.steps.size(); ++k)
    CHECK(traj.steps[k].functional - traj.steps[k - 1].functional >= -1e-10);
  CHECK(traj.steps.back().functional > traj.steps.front().functional);
  for (const auto& s : traj.states) {
    for (std::size_t j = 0; j < s.size(); ++j) CHECK(s.curvature()[j] > 0.0);
    for (std::size_t j = 1; j < s.size(); ++j) CHECK(s.slope()[j] > s.slope()[j - 1]);
  }
}

TEST_CASE("CD Gini ascent conserves the first moment and matches the Lorenz PDE") {
  const std::size_t n = 128;
  const auto rho = truncated_gaussian(Grid1D::nodes(-6.0, 6.0, n), 0.0, 1.0);
  const auto L = resampled(lorenz_map(rho, Grid1D::cdf(n)));
  EvolutionSpec sd;
  sd.structure = GradientStructure::CD({});
  sd.functional = Functional::gini_area();
  sd.direction = Direction::ascent;
  sd.dt = 2e-5;
  sd.t_end = 0.01;
  sd.stride = 100;
  EvolutionSpec sl = sd;
  sl.side = Side::lorenz;
  sl.kind = RhsKind::lorenz_pde;
  sl.functional = Functional::gini_area(Side::lorenz);
  sl.dynamics.diffusion = [](double, double, double r, const FieldMoments&) { return r; };
  const auto td = run(sd, rho);
  const auto tl = run(sl, L);
  const double drift = std::abs(td.steps.back().first_moment - td.steps.front().first_moment);
  CHECK(drift / sd.t_end < 1e-8);
  for (std::size_t k = 1; k < td.steps.size(); ++k) {
    CHECK(std::abs(td.steps[k].mass - 1.0) < 1e-12);
    CHECK(td.steps[k].functional - td.steps[k - 1].functional >= -1e-10);
  }
  const auto rep = equivalence_report(td, tl, 5e-3);
  CHECK(rep.pass);
}

TEST_CASE("trajectory bookkeeping") {
  const auto rho = truncated_gaussian(Grid1D::nodes(-3.0, 3.0, 64), 0.0, 1.0);
  EvolutionSpec spec;
  spec.kind = RhsKind::mvfpe;
  spec.dynamics = heat();
  spec.dt = 1e-4;

  SUBCASE("t_end = 0 keeps only the initial state") {
    spec.t_end = 0.0;
    const auto traj = run(spec, rho);
    REQUIRE(traj.states.size() == 1);
    CHECK(traj.times[0] == 0.0);
    CHECK(oracle::max_abs_diff(traj.states[0].values(), rho.values()) == 0.0);
  }
  SUBCASE("stride selects snapshots and the last step is always kept") {
    spec.t_end = 1e-3;
    spec.stride = 3;
    const auto traj = run(spec, rho);
    CHECK(traj.steps.size() == 11);
    REQUIRE(traj.times.size() == 5);
    for (std::size_t k = 1; k < traj.times.size(); ++k) CHECK(traj.times[k] > traj.times[k - 1]);
    CHECK(traj.times.back() == doctest::Approx(1e-3));
    for (const auto& s : traj.states) CHECK(s.grid() == rho.grid());
  }
  SUBCASE("non-integral step count") {
    spec.t_end = 1.5e-4;
    CHECK_THROWS_AS(run(spec, rho), Error);
  }
  SUBCASE("dt above the explicit bound") {
    spec.dt = 1e-2;
    spec.t_end = 1e-2;
    try {
      run(spec, rho);
      FAIL("expected StabilityViolation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::StabilityViolation);
    }
  }
  SUBCASE("side mismatch") {
    spec.kind = RhsKind::lorenz_pde;
    spec.t_end = 1e-4;
    try {
      run(spec, rho);
      FAIL("expected SideMismatch");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SideMismatch);
    }
  }
}

TEST_CASE("equivalence report") {
  const auto rho = truncated_gaussian(Grid1D::nodes(-3.0, 3.0, 64), 0.0, 1.0);
  const auto L = lorenz_map(rho, Grid1D::cdf(64));
  EvolutionSpec sd;
  sd.kind = RhsKind::mvfpe;
  sd.dynamics = heat();
  sd.t_end = 0.0;
  EvolutionSpec sl = sd;
  sl.side = Side::lorenz;
  sl.kind = RhsKind::lorenz_pde;
  const auto td = run(sd, rho);
  const auto tl = run(sl, L);

  const auto same = equivalence_report(td, tl, 1e-12);
  REQUIRE(same.rows.size() == 1);
  CHECK(same.max_sup == 0.0);
  CHECK(same.max_l2 == 0.0);
  CHECK(same.pass);

  auto late = tl;
  late.times[0] = 1.0;
  const auto off = equivalence_report(td, late, 1e-12);
  CHECK(std::isnan(off.rows[0].sup));
  CHECK_FALSE(off.pass);

  auto longer = td;
  longer.times.push_back(1.0);
  longer.states.push_back(rho);
  const auto missing = equivalence_report(longer, tl, 1e-12);
  CHECK(missing.rows.size() == 2);
  CHECK(std::isnan(missing.rows[1].sup));
  CHECK_FALSE(missing.pass);
}
