#include <algorithm>
#include <cmath>

#include "experiment_detail.hpp"

namespace lorenzflow::cli::detail {

namespace {

struct Grids {
  Grid1D x, f;
};

Grids grids(const GridConfig& g, std::size_t level) {
  const auto x = g.x(), f = g.f();
  if (level == 0) return {x, f};
  return {Grid1D::nodes(x.lo(), x.hi(), 2 * (x.size() - 1) + 1), Grid1D::cdf(2 * f.size())};
}

EvolutionSpec spec_for(const ExperimentConfig& c, Side side, std::size_t level) {
  const auto& fl = c.flow;
  EvolutionSpec s;
  s.side = side;
  s.kind = side == Side::density ? fl.density_rhs : fl.lorenz_rhs;
  s.dynamics = (side == Side::density ? fl.density_dynamics : fl.lorenz_dynamics).make();
  s.structure = c.structure.make();
  if (c.functional_given) s.functional = c.functional.make(side);
  s.direction = fl.direction;
  s.dt = level ? fl.dt / 2.0 : fl.dt;
  s.t_end = fl.t_end;
  s.stride = level ? 2 * fl.stride : fl.stride;
  s.cfl = fl.cfl;
  return s;
}

// Largest per-step move against the flow direction (0 if monotone).
template <class T>
double monotonicity_violation(const Trajectory<T>& t, Direction d) {
  double worst = 0.0;
  for (std::size_t k = 1; k < t.steps.size(); ++k) {
    const double inc = t.steps[k].functional - t.steps[k - 1].functional;
    worst = std::max(worst, d == Direction::descent ? inc : -inc);
  }
  return worst;
}

template <class T>
double mass_drift(const Trajectory<T>& t) {
  double worst = 0.0;
  for (const auto& s : t.steps) worst = std::max(worst, std::abs(s.mass - t.steps.front().mass));
  return worst;
}

template <class T>
double moment_drift(const Trajectory<T>& t) {
  double worst = 0.0;
  for (const auto& s : t.steps) worst = std::max(worst, std::abs(s.first_moment - t.steps.front().first_moment));
  return worst;
}

template <class T>
std::vector<double> functional_series(const Trajectory<T>& t) {
  std::vector<double> v;
  for (const auto& d : t.diagnostics) v.push_back(d.functional);
  return v;
}

std::string tag_of(const ExperimentConfig& c, Side side) {
  const auto& fl = c.flow;
  const RhsKind k = side == Side::density ? fl.density_rhs : fl.lorenz_rhs;
  return k == RhsKind::gradient_flow ? c.structure.make().name() : std::string(to_string(k));
}

}  // namespace

void flow_equivalence(Context& ctx) {
  const auto& c = ctx.config;
  auto& s = ctx.summary;

  auto solve = [&](std::size_t level) {
    const auto g = grids(c.grid, level);
    const auto rho0 = c.initial.front().make(g.x);
    auto d = run(spec_for(c, Side::density, level), rho0);
    auto l = run(spec_for(c, Side::lorenz, level), lorenz_map(rho0, g.f));
    auto rep = equivalence_report(d, l, c.tolerance("equivalence"));
    return std::make_tuple(std::move(d), std::move(l), std::move(rep));
  };

  const auto [d, l, rep] = solve(0);
  s.check("equivalence.max_sup", rep.max_sup, c.tolerance("equivalence"));
  s.metrics["equivalence.max_l2"] = rep.max_l2;
  s.check("density.mass_drift", mass_drift(d), c.tolerance("mass"));
  if (c.functional_given) {
    s.check("density.monotonicity", monotonicity_violation(d, c.flow.direction), c.tolerance("monotonicity"));
    s.check("lorenz.monotonicity", monotonicity_violation(l, c.flow.direction), c.tolerance("monotonicity"));
    s.series["density.functional"] = functional_series(d);
    s.series["lorenz.functional"] = functional_series(l);
  }
  if (c.tolerances.count("moment_drift"))
    s.check("density.moment_drift_rate", moment_drift(d) / c.flow.t_end, c.tolerance("moment_drift"));
  s.series["time"] = d.times;
  std::vector<double> sup;
  for (const auto& r : rep.rows) sup.push_back(r.sup);
  s.series["equivalence.sup"] = sup;

  if (c.flow.refine) {
    const auto [d2, l2, rep2] = solve(1);
    s.metrics["equivalence.max_sup_refined"] = rep2.max_sup;
    s.check("equivalence.refinement_ratio", rep2.max_sup / rep.max_sup, c.tolerance("refinement_ratio"));
  }

  if (ctx.persist()) {
    const auto dt = tag_of(c, Side::density), lt = tag_of(c, Side::lorenz);
    ctx.write("density-" + dt + ".csv", trajectory_csv(d));
    ctx.write("density-" + dt + ".json", diagnostics_json(d));
    ctx.write("lorenz-" + lt + ".csv", trajectory_csv(l));
    ctx.write("lorenz-" + lt + ".json", diagnostics_json(l));
    ctx.write("equivalence.json", to_json(rep) + "\n");
  }
}

void gini_ascent(Context& ctx) {
  const auto& c = ctx.config;
  auto& s = ctx.summary;
  const auto g = grids(c.grid, 0);
  const auto rho0 = c.initial.front().make(g.x);
  const Side side = c.flow.side;

  auto spec = spec_for(c, side, 0);
  spec.kind = RhsKind::gradient_flow;
  const auto tag = c.structure.make().name();

  auto record = [&](const auto& traj) {
    s.check(std::string(to_string(side)) + ".monotonicity", monotonicity_violation(traj, Direction::ascent),
            c.tolerance("monotonicity"));
    s.series["gini"] = functional_series(traj);
    s.series["time"] = traj.times;
    if (c.tolerances.count("mass")) s.check("mass_drift", mass_drift(traj), c.tolerance("mass"));
    if (c.tolerances.count("moment_drift"))
      s.check("moment_drift_rate", moment_drift(traj) / c.flow.t_end, c.tolerance("moment_drift"));
    ctx.write(std::string(to_string(side)) + "-" + tag + ".csv", trajectory_csv(traj));
    ctx.write(std::string(to_string(side)) + "-" + tag + ".json", diagnostics_json(traj));
  };

  if (side == Side::density) {
    const auto traj = run(spec, rho0);
    record(traj);
    if (ctx.persist()) {
      // Companion panel: the same snapshots mapped to Lorenz curves.
      LorenzTrajectory mapped;
      mapped.times = traj.times;
      for (const auto& r : traj.states) mapped.states.push_back(lorenz_map(r, g.f));
      ctx.write("lorenz-" + tag + "-mapped.csv", trajectory_csv(mapped));
    }
  } else {
    const auto traj = run(spec, lorenz_map(rho0, g.f));
    record(traj);
    if (ctx.persist()) {
      DensityTrajectory mapped;
      mapped.times = traj.times;
      for (const auto& L : traj.states) mapped.states.push_back(density_from_lorenz(L, g.x));
      ctx.write("density-" + tag + "-mapped.csv", trajectory_csv(mapped));
    }
  }
}

}  // namespace lorenzflow::cli::detail
