#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "density.hpp"
#include "functionals.hpp"
#include "geometry.hpp"
#include "lorenz.hpp"

namespace lorenzflow {

// Moments of the current field, for mean-field (McKean-Vlasov) coefficients.
struct FieldMoments {
  double mass = 1.0;
  double mean = 0.0;
};

// Drift Sigma or diffusion D of d_t rho = -d_x(Sigma rho) + d_xx(D rho),
// evaluated at (x, t, rho(x), moments).
using Coefficient = std::function<double(double, double, double, const FieldMoments&)>;

struct Dynamics {
  std::string name = "dynamics";
  Coefficient drift = [](double, double, double, const FieldMoments&) { return 0.0; };
  Coefficient diffusion = [](double, double, double, const FieldMoments&) { return 1.0; };
};

enum class RhsKind { mvfpe, lorenz_pde, gradient_flow };
enum class Direction { descent, ascent };
std::string_view to_string(RhsKind kind);
std::string_view to_string(Direction d);

struct EvolutionSpec {
  Side side = Side::density;
  RhsKind kind = RhsKind::gradient_flow;
  Dynamics dynamics;                       // mvfpe, lorenz_pde
  GradientStructure structure;             // gradient_flow
  std::optional<Functional> functional;    // gradient_flow; also tracked if set
  Direction direction = Direction::descent;
  double dt = 1e-5;
  double t_end = 0.1;
  std::size_t stride = 1;
  double cfl = 0.2;  // explicit bound: dt <= cfl * h^2 / max D_eff
};

struct SnapshotDiagnostics {
  double mass = 1.0;
  double first_moment = 0.0;
  double functional = 0.0;
  std::size_t clamp_count = 0;
};

struct StepRecord {
  double time = 0.0;
  double mass = 1.0;
  double first_moment = 0.0;
  double functional = 0.0;
};

template <class State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<SnapshotDiagnostics> diagnostics;
  std::vector<StepRecord> steps;  // every step, including t = 0
  bool tracks_functional = false;
};

using DensityTrajectory = Trajectory<Density>;
using LorenzTrajectory = Trajectory<LorenzCurve>;

// One RK4 step of the conservative Fokker-Planck equation (Scharfetter-Gummel
// fluxes, zero flux at the edges).
Density step_mvfpe(const Density& rho, const Dynamics& dyn, double t, double dt);

// One RK4 step of d_t L = -D~/L_ff + int_0^f Sigma~, with Sigma~, D~
// evaluated at x = L_f and rho = 1/L_ff.
LorenzCurve step_lorenz_pde(const LorenzCurve& L, const Dynamics& dyn, double t, double dt);

DensityTrajectory run(const EvolutionSpec& spec, const Density& init);
LorenzTrajectory run(const EvolutionSpec& spec, const LorenzCurve& init);

// Largest decay rate of the linearised right-hand side, probed with a
// checkerboard perturbation.
double stiffness(const EvolutionSpec& spec, const Density& rho, double t = 0.0);
double stiffness(const EvolutionSpec& spec, const LorenzCurve& L, double t = 0.0);

struct EquivalenceRow {
  double time = 0.0;
  double sup = 0.0;
  double l2 = 0.0;
};

struct EquivalenceReport {
  std::vector<EquivalenceRow> rows;
  double max_sup = 0.0;
  double max_l2 = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Compares L[rho(t)] with L(t) snapshot by snapshot; rows whose times do not
// line up, or that one side lacks, are NaN and fail the report.
EquivalenceReport equivalence_report(const DensityTrajectory& density, const LorenzTrajectory& lorenz,
                                     double tolerance);

}  // namespace lorenzflow
