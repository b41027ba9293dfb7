// Acceptance run: one [PASS]/[FAIL] line per criterion. Reference values come
// from oracles.hpp or from quantities computed here, never from the code path
// under test alone.
//
//   acceptance [--known-failure N]...
//
// Exit status counts failed criteria that are not listed as known failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <lorenzflow/lorenzflow.hpp>

#include "oracles.hpp"

using namespace lorenzflow;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const char* fmt, double value, double bound, const std::string& what) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, value, bound);
    notes.push_back((ok ? "  ok    " : "  FAIL  ") + what + ": " + buf);
    pass = pass && ok;
  }
  void note(bool ok, const std::string& what) {
    notes.push_back((ok ? "  ok    " : "  FAIL  ") + what);
    pass = pass && ok;
  }
  void at_most(const std::string& what, double value, double bound) {
    check(value <= bound, "%.3e <= %.1e", value, bound, what);
  }
  // Empirical orders approach their limit from either side; they are
  // compared at the two decimals they are quoted with.
  void order_at_least(const std::string& what, double value, double bound) {
    check(std::round(value * 100.0) / 100.0 >= bound, "%.5f >= %.2f", value, bound, what);
  }
  void info(const std::string& what, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", value);
    notes.push_back("  info  " + what + ": " + buf);
  }
};

double rel_sup(const std::vector<double>& a, const std::vector<double>& b) {
  return oracle::max_abs_diff(a, b) / oracle::max_abs(b);
}

std::vector<double> shifted(const Density& rho, const std::vector<double>& h, double eps) {
  std::vector<double> v(rho.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = rho[i] + eps * h[i];
  return v;
}

// ---------------------------------------------------------------- 1
Outcome transform_calculus() {
  Outcome o;
  const oracle::TruncatedNormal d{0.0, 1.0, -3.0, 3.0};
  const auto nodes = [&](std::size_t n) { return Grid1D::nodes(d.a, d.b, n); };

  // Sup errors at n = 256 on the 256-point cdf grid.
  const auto fg = Grid1D::cdf(256);
  const auto L = lorenz_map(truncated_gaussian(nodes(256), d.mu, d.sigma), fg);
  double eG = 0.0, sG = 0.0, eK = 0.0;
  for (std::size_t j = 0; j < fg.size(); ++j) {
    const double G = d.quantile(fg[j]);
    eG = std::max(eG, std::abs(L.slope()[j] - G));
    sG = std::max(sG, std::abs(G));
    eK = std::max(eK, std::abs(L.curvature()[j] * d.pdf(G) - 1.0));
  }
  o.at_most("gaussian L_f vs G (n=256)", eG / sG, 1e-3);
  o.at_most("gaussian L_ff vs 1/rho(G) (n=256)", eK, 1e-3);

  // Orders under grid doubling: RMS over a dense cdf sample, which averages
  // over where the quantiles fall inside the x cells (coarser samples leave
  // a few 1e-3 of noise in the L_ff order).
  const auto dense = Grid1D::cdf(262144);
  std::vector<double> G(dense.size()), pdfG(dense.size());
  for (std::size_t j = 0; j < dense.size(); ++j) {
    G[j] = d.quantile(dense[j]);
    pdfG[j] = d.pdf(G[j]);
  }
  auto rms = [&](std::size_t n) {
    const auto Ld = lorenz_map(truncated_gaussian(nodes(n), d.mu, d.sigma), dense);
    double s = 0.0, c = 0.0;
    for (std::size_t j = 0; j < dense.size(); ++j) {
      s += std::pow(Ld.slope()[j] - G[j], 2);
      c += std::pow(Ld.curvature()[j] * pdfG[j] - 1.0, 2);
    }
    return std::make_pair(std::sqrt(s / dense.size()), std::sqrt(c / dense.size()));
  };
  const auto [s1, c1] = rms(256);
  const auto [s2, c2] = rms(511);
  o.order_at_least("order of L_f under doubling", std::log2(s1 / s2), 2.0);
  o.order_at_least("order of L_ff under doubling", std::log2(c1 / c2), 2.0);

  // Uniform on [0, 2]: G = 2f and 1/rho = 2 exactly at every resolution.
  for (std::size_t n : {256, 511}) {
    const auto Lu = lorenz_map(uniform_density(Grid1D::nodes(0.0, 2.0, n)), Grid1D::cdf(n));
    double e = 0.0;
    for (std::size_t j = 0; j < Lu.size(); ++j)
      e = std::max({e, std::abs(Lu.slope()[j] - 2.0 * Lu.grid()[j]) / 2.0, std::abs(Lu.curvature()[j] / 2.0 - 1.0)});
    o.at_most("uniform caches exact (n=" + std::to_string(n) + ")", e, 1e-12);
  }
  return o;
}

// ---------------------------------------------------------------- 2
Outcome lemma_oracles() {
  Outcome o;
  const auto g = Grid1D::nodes(-3.0, 3.0, 256);
  const auto rho = truncated_gaussian(g, 0.1, 0.9);
  const auto fg = Grid1D::cdf(256);
  std::mt19937_64 rng(7);
  const double eps = 1e-4;
  double worst = 0.0;
  for (int k = 0; k < 12; ++k) {
    const auto h = random_perturbation(g, -2.0, 2.0, rng, k % 2 == 1);
    const Density up(g, shifted(rho, h, eps)), dn(g, shifted(rho, h, -eps));
    const auto Gp = inverse_cdf(up, fg).values, Gm = inverse_cdf(dn, fg).values;
    const auto Lp = lorenz_map(up, fg), Lm = lorenz_map(dn, fg);
    std::vector<double> fdG(fg.size()), fdL(fg.size());
    for (std::size_t j = 0; j < fg.size(); ++j) {
      fdG[j] = (Gp[j] - Gm[j]) / (2.0 * eps);
      fdL[j] = (Lp[j] - Lm[j]) / (2.0 * eps);
    }
    worst = std::max({worst, rel_sup(dt_inverse_cdf(rho, h, fg), fdG), rel_sup(dt_lorenz(rho, h, fg).values, fdL)});
  }
  o.at_most("dt_inverse_cdf and dt_lorenz vs central differences, 12 tangents", worst, 1e-3);
  return o;
}

// ---------------------------------------------------------------- 3
Outcome change_of_variables() {
  Outcome o;
  const auto g = Grid1D::nodes(-3.0, 3.0, 256);
  const auto rho = truncated_gaussian(g, 0.3, 0.9);
  const auto L = lorenz_map(rho, Grid1D::cdf(256));
  const std::vector<Functional> fs{Functional::potential(quadratic_potential()),
                                   Functional::interaction(gaussian_kernel(1.0, 0.7)), Functional::entropy(),
                                   Functional::gini_area()};
  double err = 0.0;
  for (const auto& F : fs) {
    const auto dFt = frechet(F.twin(), L);
    const auto xform = cov_frechet(dFt, rho);
    const auto fform = cov_frechet_fform(dFt, L);
    for (std::size_t j = 0; j < L.size(); ++j)
      err = std::max(err, std::abs(oracle::cubic_interpolate(g.lo(), g.spacing(), xform.values, L.slope()[j]) -
                                   fform[j]));
  }
  o.at_most("x-form vs f-form, 4 functionals", err, 1e-4);

  const auto back = cov_frechet(frechet(Functional::potential(quadratic_potential(), Side::lorenz), L), rho);
  std::vector<double> x2(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) x2[i] = g[i] * g[i];
  // Modulo constants: compare after removing the mean difference.
  double shift = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) shift += (back.values[i] - x2[i]) / g.size();
  std::vector<double> a(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) a[i] = back.values[i] - shift;
  o.at_most("V = x^2 twin recovers x^2", rel_sup(a, x2), 1e-3);
  return o;
}

// ---------------------------------------------------------------- 4
Outcome defining_property() {
  Outcome o;
  const auto x = Grid1D::nodes(-6.0, 6.0, 256);
  const auto rho = truncated_gaussian(x, 0.2, 1.0);
  const auto fg = Grid1D::cdf(256);
  const auto L = lorenz_map(rho, fg);
  const double eps = 1e-4;
  std::mt19937_64 rng(2024);
  const std::vector<GradientStructure> structures{GradientStructure::W2(),
                                                  GradientStructure::W2M(mobility_preset("saturating")),
                                                  GradientStructure::Crho(),
                                                  GradientStructure::CD(diffusivity_preset("quadratic", 0.5))};
  const std::vector<Functional> functionals{Functional::potential(quadratic_potential()),
                                            Functional::interaction(gaussian_kernel(1.0, 0.7)),
                                            Functional::entropy()};
  for (const auto& S : structures) {
    const bool moments = !S.transport_type();
    std::vector<std::vector<double>> hs;
    for (int k = 0; k < 20; ++k) hs.push_back(random_perturbation(x, -2.0, 2.0, rng, moments));
    for (const auto& F : functionals) {
      const auto gd = grad_density(S, F, rho);
      const auto gl = grad_lorenz(S, F.twin(), L);
      std::vector<double> pd, pl, fd, fl;
      for (const auto& h : hs) {
        const Density up(x, shifted(rho, h, eps)), dn(x, shifted(rho, h, -eps));
        fd.push_back((eval(F, up) - eval(F, dn)) / (2.0 * eps));
        fl.push_back((eval(F.twin(), lorenz_map(up, fg)) - eval(F.twin(), lorenz_map(dn, fg))) / (2.0 * eps));
        pd.push_back(metric_pairing(S, rho, gd, TangentVector{Side::density, x, h, moments}));
        pl.push_back(metric_pairing(S, L, gl, dt_lorenz(rho, h, fg)));
      }
      o.at_most(S.name() + " / " + F.name() + " density", rel_sup(pd, fd), 1e-3);
      o.at_most(S.name() + " / " + F.name() + " lorenz", rel_sup(pl, fl), 1e-3);
    }
  }
  return o;
}

// ---------------------------------------------------------------- 5, 6
struct FlowRun {
  DensityTrajectory density;
  LorenzTrajectory lorenz;
  double max_sup = 0.0;
};

// Discrepancy sup_f |L[rho(t)] - L(t)| over all snapshots, computed here.
double discrepancy(const DensityTrajectory& d, const LorenzTrajectory& l) {
  double worst = 0.0;
  if (d.times.size() != l.times.size()) return INFINITY;
  for (std::size_t k = 0; k < d.times.size(); ++k) {
    if (std::abs(d.times[k] - l.times[k]) > 1e-12) return INFINITY;
    const auto mapped = lorenz_map(d.states[k], l.states[k].grid());
    worst = std::max(worst, oracle::max_abs_diff(mapped.values(), l.states[k].values()));
  }
  return worst;
}

FlowRun flow_pair(EvolutionSpec sd, EvolutionSpec sl, const oracle::TruncatedNormal& init, std::size_t n,
                  std::size_t level) {
  const std::size_t nx = level ? 2 * (n - 1) + 1 : n, nf = level ? 2 * n : n;
  for (auto* s : {&sd, &sl}) {
    if (level) {
      s->dt /= 2.0;
      s->stride *= 2;
    }
  }
  const auto rho0 = truncated_gaussian(Grid1D::nodes(init.a, init.b, nx), init.mu, init.sigma);
  FlowRun r{run(sd, rho0), run(sl, lorenz_map(rho0, Grid1D::cdf(nf))), 0.0};
  r.max_sup = discrepancy(r.density, r.lorenz);
  return r;
}

Outcome heat_equivalence() {
  Outcome o;
  EvolutionSpec sd;
  sd.structure = GradientStructure::W2();
  sd.functional = Functional::entropy();
  sd.dt = 1e-5;
  sd.t_end = 0.1;
  sd.stride = 1000;
  sd.cfl = 0.25;
  EvolutionSpec sl = sd;
  sl.side = Side::lorenz;
  sl.functional = Functional::entropy(Side::lorenz);
  const oracle::TruncatedNormal init{0.0, 1.0, -3.0, 3.0};
  const auto coarse = flow_pair(sd, sl, init, 256, 0);
  const auto fine = flow_pair(sd, sl, init, 256, 1);
  o.at_most("max sup discrepancy (n=256, dt=1e-5, t=0.1)", coarse.max_sup, 5e-3);
  o.at_most("refined / coarse discrepancy", fine.max_sup / coarse.max_sup, 0.5);

  // Independent physics check: heat flow grows the variance at rate 2
  // (up to the reflecting edges, which the t=0.1 mass barely reaches).
  auto variance = [](const Density& r) {
    const auto& g = r.grid();
    double m = 0.0, s = 0.0, w = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double q = (i == 0 || i + 1 == g.size() ? 0.5 : 1.0) * g.spacing() * r[i];
      w += q;
      m += q * g[i];
    }
    m /= w;
    for (std::size_t i = 0; i < g.size(); ++i)
      s += (i == 0 || i + 1 == g.size() ? 0.5 : 1.0) * g.spacing() * r[i] * (g[i] - m) * (g[i] - m);
    return s / w;
  };
  const double dv = variance(coarse.density.states[1]) - variance(coarse.density.states[0]);
  o.at_most("density-side variance rate vs 2 (first 0.01)", std::abs(dv / coarse.density.times[1] - 2.0) / 2.0, 5e-2);
  return o;
}

Outcome gini_equivalence() {
  Outcome o;
  EvolutionSpec sd;
  sd.structure = GradientStructure::CD({});
  sd.functional = Functional::gini_area();
  sd.direction = Direction::ascent;
  sd.dt = 1e-5;
  sd.t_end = 0.1;
  sd.stride = 1000;
  sd.cfl = 0.25;
  EvolutionSpec sl = sd;
  sl.side = Side::lorenz;
  sl.kind = RhsKind::lorenz_pde;
  sl.functional = Functional::gini_area(Side::lorenz);
  sl.dynamics.diffusion = [](double, double, double r, const FieldMoments&) { return r; };
  const oracle::TruncatedNormal init{0.0, 1.0, -6.0, 6.0};
  const auto coarse = flow_pair(sd, sl, init, 256, 0);
  const auto fine = flow_pair(sd, sl, init, 256, 1);
  o.at_most("max sup discrepancy (n=256, dt=1e-5, t=0.1)", coarse.max_sup, 5e-3);
  o.at_most("refined / coarse discrepancy", fine.max_sup / coarse.max_sup, 0.5);

  auto decrease = [](const auto& steps) {
    double worst = 0.0;
    for (std::size_t k = 1; k < steps.size(); ++k) worst = std::max(worst, steps[k - 1].functional - steps[k].functional);
    return worst;
  };
  o.at_most("Lorenz-side per-step Gini decrease", decrease(coarse.lorenz.steps), 1e-10);
  o.at_most("density-side per-step Gini decrease", decrease(coarse.density.steps), 1e-10);

  // First moment by trapezoid on every snapshot.
  double drift = 0.0;
  auto moment = [](const Density& r) {
    const auto& g = r.grid();
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      m += (i == 0 || i + 1 == g.size() ? 0.5 : 1.0) * g.spacing() * r[i] * g[i];
    return m;
  };
  for (const auto& s : coarse.density.states)
    drift = std::max(drift, std::abs(moment(s) - moment(coarse.density.states.front())));
  double step_drift = 0.0;
  for (const auto& s : coarse.density.steps)
    step_drift = std::max(step_drift, std::abs(s.first_moment - coarse.density.steps.front().first_moment));
  o.at_most("first-moment drift per unit time (snapshots)", drift / sd.t_end, 1e-8);
  o.at_most("first-moment drift per unit time (every step)", step_drift / sd.t_end, 1e-8);
  return o;
}

// ---------------------------------------------------------------- 7
Outcome w2_isometry() {
  Outcome o;
  const auto fg = Grid1D::cdf(256);
  const std::size_t K = 32;
  struct Pair {
    std::string name;
    Density a, b;
    double reference;  // W2^2 of the continuous densities
    bool pinned;       // reference value fixed by the criterion itself
  };
  auto quantile_oracle = [](const std::function<double(double)>& G0, const std::function<double(double)>& G1) {
    return oracle::simpson([&](double f) { return std::pow(G0(f) - G1(f), 2); }, 1e-12, 1.0 - 1e-12, 2000);
  };
  const auto x6 = Grid1D::nodes(-6.0, 6.0, 256), x3 = Grid1D::nodes(-3.0, 3.0, 256);
  const oracle::TruncatedNormal p{-0.3, 0.8, -3.0, 3.0}, q{0.4, 1.1, -3.0, 3.0}, r{0.0, 0.5, -3.0, 3.0},
      s{0.0, 1.0, -3.0, 3.0};
  const auto g6 = truncated_gaussian(x6, 0.0, 1.0);
  std::vector<Pair> pairs;
  pairs.push_back({"translation by 0.7", g6, translate(g6, 0.7), 0.49, true});
  pairs.push_back({"uniform[0,2] -> uniform[0,4]", uniform_density(Grid1D::nodes(0.0, 2.0, 256)),
                   uniform_density(Grid1D::nodes(0.0, 4.0, 256)),
                   quantile_oracle([](double f) { return 2.0 * f; }, [](double f) { return 4.0 * f; }), true});
  pairs.push_back({"gaussians, shifted and widened", truncated_gaussian(x3, p.mu, p.sigma),
                   truncated_gaussian(x3, q.mu, q.sigma),
                   quantile_oracle([&](double f) { return p.quantile(f); }, [&](double f) { return q.quantile(f); }), false});
  pairs.push_back({"gaussians, narrowed", truncated_gaussian(x3, s.mu, s.sigma), truncated_gaussian(x3, r.mu, r.sigma),
                   quantile_oracle([&](double f) { return s.quantile(f); }, [&](double f) { return r.quantile(f); }), false});
  pairs.push_back({"gaussian -> uniform[-3,3]", truncated_gaussian(x3, p.mu, p.sigma), uniform_density(x3),
                   quantile_oracle([&](double f) { return p.quantile(f); }, [](double f) { return -3.0 + 6.0 * f; }), false});

  for (const auto& pr : pairs) {
    const double w = w2_distance_closed_form(pr.a, pr.b, fg.size());
    const double act = action(GradientStructure::W2(), geodesic_w2(pr.a, pr.b, K, fg)).value;
    o.at_most(pr.name + ": |W2^2 - geodesic action| / W2^2", std::abs(w * w - act) / (w * w), 1e-3);
    const double ref_err = std::abs(w * w - pr.reference) / pr.reference;
    // Elsewhere the gap to the continuous value is the O(h^2) error of the
    // piecewise-linear densities, reported but not part of the criterion.
    if (pr.pinned)
      o.at_most(pr.name + ": |W2^2 - reference| / reference", ref_err, 1e-3);
    else
      o.info(pr.name + ": |W2^2 - continuous W2^2| / continuous W2^2", ref_err);
  }
  return o;
}

// ---------------------------------------------------------------- 8, 9
Grid1D window() { return Grid1D::nodes(-2.0, 2.0, 256); }

DensityPath drifting_path(bool fixed_mean) {
  DensityPath p{uniform_times(32), {}};
  for (double t : p.times) {
    const double mu = fixed_mean ? 0.0 : 0.5 * t;
    const double sigma = 0.8 + 0.4 * t * t + 0.1 * std::sin(3.0 * t);
    p.states.push_back(truncated_gaussian(window(), mu, sigma));
  }
  return p;
}

Outcome curvewise_isometry() {
  Outcome o;
  const auto fg = Grid1D::cdf(256);
  struct Case {
    GradientStructure S;
    bool fixed_mean;
  };
  const std::vector<Case> cases{{GradientStructure::W2M(mobility_preset("one")), false},
                                {GradientStructure::W2M(mobility_preset("rho")), false},
                                {GradientStructure::W2M(mobility_preset("saturating")), false},
                                {GradientStructure::CD(diffusivity_preset("one")), true},
                                {GradientStructure::CD(diffusivity_preset("quadratic", 0.5)), true}};
  const auto a = truncated_gaussian(window(), -0.3, 0.8), b = truncated_gaussian(window(), 0.4, 1.1);
  const auto c = truncated_gaussian(window(), 0.0, 0.8), d = truncated_gaussian(window(), 0.0, 1.1);
  for (const auto& cs : cases) {
    const auto dp = drifting_path(cs.fixed_mean);
    const auto name = cs.S.name();
    o.at_most(name + " prescribed path, density -> Lorenz", transfer_check(cs.S, dp, fg).relative_error, 1e-3);
    o.at_most(name + " prescribed path, Lorenz -> density",
              transfer_check(cs.S, to_lorenz(dp, fg), window()).relative_error, 1e-3);
    const auto rep = cs.fixed_mean ? isometry_report(cs.S, c, d, 32, {}, 1e-3) : isometry_report(cs.S, a, b, 32, {}, 1e-3);
    o.at_most(name + " optimizer output, Lorenz -> density", rep.lorenz_to_density.relative_error, 1e-3);
    o.at_most(name + " optimizer output, density -> Lorenz", rep.density_to_lorenz.relative_error, 1e-3);
  }
  return o;
}

Outcome optimizer_sanity() {
  Outcome o;
  const auto fg = Grid1D::cdf(256);
  const auto a = truncated_gaussian(window(), -0.3, 0.8), b = truncated_gaussian(window(), 0.4, 1.1);
  const auto geo = geodesic_w2(a, b, 32, fg);
  const double w = w2_distance_closed_form(a, b, fg.size());
  const auto res = minimize_action(GradientStructure::W2(), geo);
  o.at_most("initial action vs W2^2", std::abs(res.history.front() - w * w) / (w * w), 1e-3);
  o.at_most("relative improvement over the geodesic",
            (res.history.front() - res.report.value) / res.history.front(), 1e-4);
  return o;
}

// ---------------------------------------------------------------- 10
int run_cli(const std::string& args, const fs::path& root) {
  const std::string cmd = "LORENZFLOW_OUTPUT_ROOT='" + root.string() + "' '" + CLI_BIN + "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
  Outcome o;
  const auto base = fs::temp_directory_path() / "lorenzflow_acceptance";
  fs::remove_all(base);
  for (const std::string name : {"transform-roundtrip", "gini-ascent", "isometry"}) {
    const std::string cfg = std::string(CONFIG_DIR) + "/" + name + ".json";
    std::string out[2];
    for (int k = 0; k < 2; ++k) {
      const auto root = base / ("run" + std::to_string(k));
      run_cli("verify '" + cfg + "'", root);
      try {
        out[k] = read_file((root / name / "summary.json").string());
      } catch (const Error&) {
      }
    }
    const bool same = !out[0].empty() && out[0] == out[1];
    o.note(same, name + " summary.json byte-identical (" + std::to_string(out[0].size()) + " bytes)");
  }
  fs::remove_all(base);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--known-failure") known.insert(std::atoi(argv[++i]));

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"transform calculus", transform_calculus},
      {"variation lemmas vs finite differences", lemma_oracles},
      {"change of variables for derivatives", change_of_variables},
      {"gradient defining property", defining_property},
      {"heat flow equivalence", heat_equivalence},
      {"C_D Gini ascent vs Lorenz PDE", gini_equivalence},
      {"W2 isometry on preset pairs", w2_isometry},
      {"curve-wise isometry", curvewise_isometry},
      {"optimizer sanity", optimizer_sanity},
      {"determinism of verify", determinism},
  };
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("  FAIL  threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %d %s (%.1fs)%s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), secs,
                !o.pass && known.count(id) ? " [known failure]" : "");
    for (const auto& n : o.notes) std::printf("%s\n", n.c_str());
    std::fflush(stdout);
    if (!o.pass && !known.count(id)) ++unexpected;
  }
  return unexpected;
}
