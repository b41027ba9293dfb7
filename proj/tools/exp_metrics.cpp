#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "experiment_detail.hpp"

namespace lorenzflow::cli::detail {

namespace {

// Mixture path (1 - t) rho0 + t rho1: smooth, and keeps the first moment
// fixed when the endpoints share it.
DensityPath mixture_path(const Density& a, const Density& b, std::size_t K) {
  DensityPath p{uniform_times(K), {}};
  for (double t : p.times) {
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (1.0 - t) * a[i] + t * b[i];
    p.states.emplace_back(a.grid(), std::move(v));
  }
  return p;
}

template <class Path>
std::vector<double> times_of(const Path& p) {
  return p.times;
}

}  // namespace

void isometry(Context& ctx) {
  const auto& c = ctx.config;
  const auto& iso = c.isometry;
  auto& s = ctx.summary;
  const auto x = c.grid.x();
  const auto fg = c.grid.f();
  const OptimizerOptions opts{iso.iterations};
  nlohmann::json reports = nlohmann::json::array();

  for (std::size_t i = 0; i < iso.pairs.size(); ++i) {
    const auto rho0 = iso.pairs[i].first.make(x), rho1 = iso.pairs[i].second.make(x);
    const std::string pair = "pair" + std::to_string(i);
    const auto geodesic = geodesic_w2(rho0, rho1, iso.K, fg);

    for (const auto& sc : iso.structures) {
      const auto S = sc.make();
      const std::string key = pair + "." + S.name();

      if (S.tag == StructureTag::W2) {
        const double w = w2_distance_closed_form(rho0, rho1, fg.size());
        const double a = action(S, geodesic).value;
        s.check(key + ".closed_form", std::abs(w * w - a) / (w * w), c.tolerance("closed_form"));
        const auto best = minimize_action(S, geodesic, opts);
        const double gain = (best.history.front() - best.report.value) / best.history.front();
        s.check(key + ".no_improvement", gain, c.tolerance("no_improvement"));
      }

      const auto mix = mixture_path(rho0, rho1, iso.K);
      s.check(key + ".prescribed.density_to_lorenz", transfer_check(S, mix, fg).relative_error,
              c.tolerance("transfer"));
      s.check(key + ".prescribed.lorenz_to_density", transfer_check(S, to_lorenz(mix, fg), x).relative_error,
              c.tolerance("transfer"));

      const auto rep = isometry_report(S, rho0, rho1, iso.K, opts, c.tolerance("transfer"), fg.size());
      s.check(key + ".optimized.lorenz_to_density", rep.lorenz_to_density.relative_error, c.tolerance("transfer"));
      s.check(key + ".optimized.density_to_lorenz", rep.density_to_lorenz.relative_error, c.tolerance("transfer"));
      s.metrics[key + ".density_action"] = rep.density_action;
      s.metrics[key + ".lorenz_action"] = rep.lorenz_action;
      auto j = nlohmann::json::parse(to_json(rep));
      j["pair"] = i;
      reports.push_back(std::move(j));
    }

    if (ctx.persist()) {
      const auto dpath = to_density(geodesic, x);
      DensityTrajectory dt;
      dt.times = times_of(dpath);
      dt.states = dpath.states;
      LorenzTrajectory lt;
      lt.times = times_of(geodesic);
      lt.states = geodesic.states;
      ctx.write("density-geodesic-" + pair + ".csv", trajectory_csv(dt));
      ctx.write("lorenz-geodesic-" + pair + ".csv", trajectory_csv(lt));
    }
  }
  ctx.write("isometry.json", reports.dump(1) + "\n");
}

void functional_audit(Context& ctx) {
  const auto& c = ctx.config;
  const auto& a = c.audit;
  auto& s = ctx.summary;
  const auto x = c.grid.x();
  const auto fg = c.grid.f();
  const auto rho = c.initial.front().make(x);
  const auto L = lorenz_map(rho, fg);
  const auto w = quadrature_weights(x);
  const double eps = a.epsilon;
  std::mt19937_64 rng(c.seed);

  auto shifted = [&](const std::vector<double>& h, double e) {
    std::vector<double> v(rho.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = rho[i] + e * h[i];
    return Density(x, std::move(v));
  };

  // Moment-constrained tangents serve every structure and keep the Lorenz
  // pairing free of boundary terms.
  std::vector<std::vector<double>> hs;
  for (std::size_t k = 0; k < a.tangents; ++k) hs.push_back(random_perturbation(x, a.support_lo, a.support_hi, rng, true));

  for (const auto& fc : a.functionals) {
    const auto F = fc.make(Side::density);
    const auto Ft = F.twin();
    const auto dF = frechet(F, rho);
    const auto dFt = frechet(Ft, L);
    std::vector<double> fd_d, fd_l, pair_d, pair_l;
    std::vector<TangentVector> etas;
    for (const auto& h : hs) {
      const auto up = shifted(h, eps), dn = shifted(h, -eps);
      fd_d.push_back((eval(F, up) - eval(F, dn)) / (2.0 * eps));
      fd_l.push_back((eval(Ft, lorenz_map(up, fg)) - eval(Ft, lorenz_map(dn, fg))) / (2.0 * eps));
      double pd = 0.0, pl = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) pd += w[i] * dF.values[i] * h[i];
      etas.push_back(dt_lorenz(rho, h, fg));
      for (std::size_t j = 0; j < fg.size(); ++j) pl += fg.spacing() * dFt.values[j] * etas.back().values[j];
      pair_d.push_back(pd);
      pair_l.push_back(pl);
    }
    const std::string fname = F.name();
    s.check(fname + ".density.frechet", rel_sup(pair_d, fd_d), c.tolerance("frechet"));
    s.check(fname + ".lorenz.frechet", rel_sup(pair_l, fd_l), c.tolerance("frechet"));

    for (const auto& sc : a.structures) {
      const auto S = sc.make();
      const auto gd = grad_density(S, F, rho);
      const auto gl = grad_lorenz(S, Ft, L);
      std::vector<double> md, ml;
      for (std::size_t k = 0; k < hs.size(); ++k) {
        md.push_back(metric_pairing(S, rho, gd, TangentVector{Side::density, x, hs[k], !S.transport_type()}));
        ml.push_back(metric_pairing(S, L, gl, etas[k]));
      }
      const std::string key = S.name() + "." + fname;
      s.check(key + ".density.gradient", rel_sup(md, fd_d), c.tolerance("gradient"));
      s.check(key + ".lorenz.gradient", rel_sup(ml, fd_l), c.tolerance("gradient"));
    }
  }
}

}  // namespace lorenzflow::cli::detail
