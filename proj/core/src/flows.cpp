#include "lorenzflow/flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lorenzflow/errors.hpp"
#include "lorenzflow/transforms.hpp"

namespace lorenzflow {

std::string_view to_string(RhsKind kind) {
  switch (kind) {
    case RhsKind::mvfpe: return "mvfpe";
    case RhsKind::lorenz_pde: return "lorenz_pde";
    case RhsKind::gradient_flow: return "gradient_flow";
  }
  return "unknown";
}

std::string_view to_string(Direction d) { return d == Direction::descent ? "descent" : "ascent"; }

namespace {

using Vec = std::vector<double>;
constexpr double kClampBudget = 1e-9;

template <class Rhs>
Vec rk4(const Vec& y, double t, double dt, Rhs&& f) {
  const std::size_t n = y.size();
  Vec stage(n);
  const Vec k1 = f(y, t);
  for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * dt * k1[i];
  const Vec k2 = f(stage, t + 0.5 * dt);
  for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * dt * k2[i];
  const Vec k3 = f(stage, t + 0.5 * dt);
  for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + dt * k3[i];
  const Vec k4 = f(stage, t + dt);
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

double rk4_amplification(double z) { return std::abs(1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0); }

double bernoulli(double z) { return std::abs(z) < 1e-12 ? 1.0 - 0.5 * z : z / std::expm1(z); }

FieldMoments moments_of(const Grid1D& g, const Vec& v) {
  const double m = integrate(g, v);
  return {m, first_moment(g, v) / m};
}

// Scharfetter-Gummel discretisation of -d_x(Sigma rho) + d_xx(D rho).
Vec mvfpe_rhs(const Grid1D& g, const Dynamics& dyn, const Vec& r, double t) {
  const std::size_t n = r.size();
  const double h = g.spacing();
  const auto mom = moments_of(g, r);
  Vec u(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double D = dyn.diffusion(g[i], t, r[i], mom);
    if (!(D > 0.0)) fail(ErrorKind::InvalidArgument, "diffusion coefficient must be positive");
    u[i] = D * r[i];
    v[i] = dyn.drift(g[i], t, r[i], mom) / D;
  }
  const auto vol = quadrature_weights(g);
  Vec J(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double z = 0.5 * (v[i] + v[i + 1]) * h;
    J[i] = (bernoulli(-z) * u[i] - bernoulli(z) * u[i + 1]) / h;
  }
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double right = i + 1 < n ? J[i] : 0.0;
    const double left = i > 0 ? J[i - 1] : 0.0;
    out[i] = -(right - left) / vol[i];
  }
  return out;
}

Vec lorenz_pde_rhs(const LorenzCurve& L, const Dynamics& dyn, double t) {
  const std::size_t n = L.size();
  const FieldMoments mom{1.0, L.total()};
  Vec sigma(n), out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = L.slope()[j], rho = 1.0 / L.curvature()[j];
    sigma[j] = dyn.drift(x, t, rho, mom);
    out[j] = -dyn.diffusion(x, t, rho, mom) * rho;
  }
  const auto S = cumulative(L.grid(), sigma);
  for (std::size_t j = 0; j < n; ++j) out[j] += S[j];
  return out;
}

LorenzCurve rebuild(const LorenzCurve& like, Vec values) {
  return LorenzCurve::from_values(like.grid(), std::move(values), like.support(), like.closure());
}

void check_convex(const Grid1D& g, const Vec& L) {
  for (std::size_t j = 1; j + 1 < L.size(); ++j)
    if (!(L[j + 1] - 2.0 * L[j] + L[j - 1] > 0.0))
      fail(ErrorKind::ConvexityLoss, "Lorenz curve lost convexity at f = " + std::to_string(g[j]));
}

Density admit(const Grid1D& g, Vec values, double floor) {
  Density rho(g, std::move(values), floor);
  if (rho.clamped_mass() > kClampBudget)
    fail(ErrorKind::PositivityLoss, "clamped mass " + std::to_string(rho.clamped_mass()) + " exceeds budget");
  return rho;
}

// Right-hand sides as functions of the raw state vector.
struct DensitySystem {
  const EvolutionSpec& spec;
  Grid1D grid;
  double floor;

  Vec operator()(const Vec& y, double t) const {
    if (spec.kind == RhsKind::mvfpe) return mvfpe_rhs(grid, spec.dynamics, y, t);
    const Density rho(grid, y, floor);
    auto g = grad_density(spec.structure, *spec.functional, rho).values;
    if (spec.direction == Direction::descent)
      for (auto& v : g) v = -v;
    return g;
  }
};

struct LorenzSystem {
  const EvolutionSpec& spec;
  const LorenzCurve& like;

  Vec operator()(const Vec& y, double t) const {
    const auto L = rebuild(like, y);
    if (spec.kind == RhsKind::lorenz_pde) return lorenz_pde_rhs(L, spec.dynamics, t);
    auto g = grad_lorenz(spec.structure, *spec.functional, L).values;
    if (spec.direction == Direction::descent)
      for (auto& v : g) v = -v;
    return g;
  }
};

template <class System>
double probe(const System& sys, const Vec& y, double t, const Vec& delta, const std::vector<bool>& use) {
  const Vec base = sys(y, t);
  Vec yp = y;
  for (std::size_t i = 0; i < y.size(); ++i) yp[i] += delta[i];
  const Vec pert = sys(yp, t);
  double lam = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (use[i] && delta[i] != 0.0) lam = std::max(lam, std::abs((pert[i] - base[i]) / delta[i]));
  return lam;
}

double density_stiffness(const DensitySystem& sys, const Vec& y, double t) {
  const double peak = *std::max_element(y.begin(), y.end());
  Vec delta(y.size());
  std::vector<bool> use(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    delta[i] = 1e-6 * y[i] * (i % 2 == 0 ? 1.0 : -1.0);
    use[i] = y[i] > 1e-3 * peak;
  }
  return probe(sys, y, t, delta, use);
}

double lorenz_stiffness(const LorenzSystem& sys, const LorenzCurve& L, double t) {
  const auto& k = L.curvature();
  const double kmin = *std::min_element(k.begin(), k.end());
  const double h = L.grid().spacing();
  Vec delta(L.size());
  std::vector<bool> use(L.size(), true);
  use.front() = use.back() = false;
  for (std::size_t j = 0; j < L.size(); ++j) delta[j] = 1e-6 * kmin * h * h * (j % 2 == 0 ? 1.0 : -1.0);
  return probe(sys, L.values(), t, delta, use);
}

void check_rk4_stable(double lambda, double dt, double t) {
  if (lambda > 0.0 && rk4_amplification(-lambda * dt) >= 1.0) {
    std::ostringstream os;
    os << "explicit step unstable: stiffness " << lambda << " x dt " << dt << " = " << lambda * dt;
    throw Error(ErrorKind::StabilityViolation, os.str(), t);
  }
}

void check_cfl(const EvolutionSpec& spec, double lambda) {
  // lambda ~ 4 max D_eff / h^2 for the checkerboard mode.
  if (lambda * spec.dt > 4.0 * spec.cfl) {
    std::ostringstream os;
    os << "dt = " << spec.dt << " exceeds the explicit bound " << 4.0 * spec.cfl / lambda
       << " (cfl factor " << spec.cfl << ")";
    fail(ErrorKind::StabilityViolation, os.str());
  }
}

std::size_t step_count(const EvolutionSpec& spec) {
  if (!(spec.dt > 0.0)) fail(ErrorKind::InvalidArgument, "dt must be positive");
  if (!(spec.t_end >= 0.0)) fail(ErrorKind::InvalidArgument, "t_end must be nonnegative");
  if (spec.stride == 0) fail(ErrorKind::InvalidArgument, "stride must be positive");
  if (!(spec.cfl > 0.0)) fail(ErrorKind::InvalidArgument, "cfl factor must be positive");
  const double ratio = spec.t_end / spec.dt;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio))
    fail(ErrorKind::InvalidArgument, "t_end / dt must be an integer");
  return static_cast<std::size_t>(steps);
}

void check_spec(const EvolutionSpec& spec, Side side) {
  if (spec.side != side) fail(ErrorKind::SideMismatch, "initial state does not match the spec side");
  if (spec.kind == RhsKind::mvfpe && side != Side::density)
    fail(ErrorKind::SideMismatch, "mvfpe runs on the density side");
  if (spec.kind == RhsKind::lorenz_pde && side != Side::lorenz)
    fail(ErrorKind::SideMismatch, "lorenz_pde runs on the Lorenz side");
  if (spec.kind == RhsKind::gradient_flow && !spec.functional)
    fail(ErrorKind::InvalidArgument, "gradient flow needs a functional");
  if (spec.functional && spec.functional->side() != side)
    fail(ErrorKind::SideMismatch, "functional side does not match the spec side");
}

[[noreturn]] void rethrow_at(const Error& e, double t) {
  std::ostringstream os;
  os << e.what() << " (t = " << t << ")";
  throw Error(e.kind(), os.str(), t);
}

}  // namespace

Density step_mvfpe(const Density& rho, const Dynamics& dyn, double t, double dt) {
  EvolutionSpec spec;
  spec.kind = RhsKind::mvfpe;
  spec.dynamics = dyn;
  const DensitySystem sys{spec, rho.grid(), rho.floor()};
  check_rk4_stable(density_stiffness(sys, rho.values(), t), dt, t);
  return admit(rho.grid(), rk4(rho.values(), t, dt, sys), rho.floor());
}

LorenzCurve step_lorenz_pde(const LorenzCurve& L, const Dynamics& dyn, double t, double dt) {
  EvolutionSpec spec;
  spec.side = Side::lorenz;
  spec.kind = RhsKind::lorenz_pde;
  spec.dynamics = dyn;
  const LorenzSystem sys{spec, L};
  check_rk4_stable(lorenz_stiffness(sys, L, t), dt, t);
  auto next = rk4(L.values(), t, dt, sys);
  check_convex(L.grid(), next);
  return rebuild(L, std::move(next));
}

double stiffness(const EvolutionSpec& spec, const Density& rho, double t) {
  return density_stiffness(DensitySystem{spec, rho.grid(), rho.floor()}, rho.values(), t);
}

double stiffness(const EvolutionSpec& spec, const LorenzCurve& L, double t) {
  return lorenz_stiffness(LorenzSystem{spec, L}, L, t);
}

DensityTrajectory run(const EvolutionSpec& spec, const Density& init) {
  check_spec(spec, Side::density);
  const std::size_t steps = step_count(spec);
  DensityTrajectory traj;
  traj.tracks_functional = spec.functional.has_value();
  const DensitySystem sys{spec, init.grid(), init.floor()};

  auto record = [&](const Density& rho, double t, bool snapshot, double raw_mass) {
    const double F = spec.functional ? eval(*spec.functional, rho) : 0.0;
    traj.steps.push_back({t, raw_mass, rho.mean(), F});
    if (snapshot) {
      traj.times.push_back(t);
      traj.states.push_back(rho);
      traj.diagnostics.push_back({raw_mass, rho.mean(), F, rho.clamp_count()});
    }
  };

  Density rho = init;
  record(rho, 0.0, true, rho.mass());
  check_cfl(spec, density_stiffness(sys, rho.values(), 0.0));
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * spec.dt;
    const double t_next = static_cast<double>(k + 1) * spec.dt;
    try {
      if (k > 0 && k % spec.stride == 0) check_rk4_stable(density_stiffness(sys, rho.values(), t), spec.dt, t);
      Density next = admit(rho.grid(), rk4(rho.values(), t, spec.dt, sys), rho.floor());
      const double raw = next.raw_mass();
      rho = std::move(next);
      record(rho, t_next, (k + 1) % spec.stride == 0 || k + 1 == steps, raw);
    } catch (const Error& e) {
      rethrow_at(e, t);
    }
  }
  return traj;
}

LorenzTrajectory run(const EvolutionSpec& spec, const LorenzCurve& init) {
  check_spec(spec, Side::lorenz);
  const std::size_t steps = step_count(spec);
  LorenzTrajectory traj;
  traj.tracks_functional = spec.functional.has_value();

  auto record = [&](const LorenzCurve& L, double t, bool snapshot) {
    const double F = spec.functional ? eval(*spec.functional, L) : 0.0;
    traj.steps.push_back({t, 1.0, L.total(), F});
    if (snapshot) {
      traj.times.push_back(t);
      traj.states.push_back(L);
      traj.diagnostics.push_back({1.0, L.total(), F, 0});
    }
  };

  LorenzCurve L = init;
  record(L, 0.0, true);
  check_cfl(spec, lorenz_stiffness(LorenzSystem{spec, L}, L, 0.0));
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * spec.dt;
    try {
      const LorenzSystem sys{spec, L};
      if (k > 0 && k % spec.stride == 0) check_rk4_stable(lorenz_stiffness(sys, L, t), spec.dt, t);
      auto next = rk4(L.values(), t, spec.dt, sys);
      check_convex(L.grid(), next);
      L = rebuild(L, std::move(next));
      record(L, static_cast<double>(k + 1) * spec.dt, (k + 1) % spec.stride == 0 || k + 1 == steps);
    } catch (const Error& e) {
      rethrow_at(e, t);
    }
  }
  return traj;
}

EquivalenceReport equivalence_report(const DensityTrajectory& density, const LorenzTrajectory& lorenz,
                                     double tolerance) {
  EquivalenceReport rep;
  rep.tolerance = tolerance;
  const std::size_t rows = std::max(density.times.size(), lorenz.times.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  bool complete = rows > 0;
  for (std::size_t k = 0; k < rows; ++k) {
    EquivalenceRow row{nan, nan, nan};
    if (k < density.times.size() && k < lorenz.times.size()) {
      const double td = density.times[k], tl = lorenz.times[k];
      row.time = td;
      if (std::abs(td - tl) <= 1e-12 * std::max(1.0, std::abs(td))) {
        const auto& L = lorenz.states[k];
        const auto mapped = lorenz_map(density.states[k], L.grid());
        double sup = 0.0, sq = 0.0;
        for (std::size_t j = 0; j < L.size(); ++j) {
          const double e = mapped[j] - L[j];
          sup = std::max(sup, std::abs(e));
          sq += e * e;
        }
        row.sup = sup;
        row.l2 = std::sqrt(sq * L.grid().spacing());
      }
    } else {
      row.time = k < density.times.size() ? density.times[k] : lorenz.times[k];
    }
    if (std::isnan(row.sup)) complete = false;
    else {
      rep.max_sup = std::max(rep.max_sup, row.sup);
      rep.max_l2 = std::max(rep.max_l2, row.l2);
    }
    rep.rows.push_back(row);
  }
  rep.pass = complete && rep.max_sup <= tolerance;
  return rep;
}

}  // namespace lorenzflow
