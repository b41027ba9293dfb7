#include <algorithm>
#include <cmath>
#include <limits>

#include "experiment_detail.hpp"

namespace lorenzflow::cli::detail {

namespace {

// Reference resolution and the dense cdf sample used for convergence orders.
constexpr std::size_t kRefine = 32;
constexpr std::size_t kDense = 262144;

// Caches L_f = G and L_ff = 1/rho(G) of the sampled density against those of
// the same preset resolved kRefine times finer; the gap is the
// discretisation error of the piecewise-linear density. Slopes are compared
// relative to max |G|, curvatures pointwise (1/rho(G) spans decades).
struct Errors {
  double slope = 0.0;
  double curvature = 0.0;
};

Errors sup_errors(const LorenzCurve& L, const LorenzCurve& ref) {
  Errors e{rel_sup(L.slope(), ref.slope()), 0.0};
  for (std::size_t j = 0; j < L.size(); ++j)
    e.curvature = std::max(e.curvature, std::abs(L.curvature()[j] / ref.curvature()[j] - 1.0));
  return e;
}

// Root-mean-square over a dense f sample: sup norms over a few hundred
// quantiles depend on where they fall inside the x cells, which blurs orders.
Errors rms_errors(const LorenzCurve& L, const LorenzCurve& ref) {
  double s = 0.0, c = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < L.size(); ++j) {
    const double ds = L.slope()[j] - ref.slope()[j];
    const double dc = L.curvature()[j] / ref.curvature()[j] - 1.0;
    s += ds * ds;
    c += dc * dc;
    scale = std::max(scale, std::abs(ref.slope()[j]));
  }
  const double n = static_cast<double>(L.size());
  return {std::sqrt(s / n) / scale, std::sqrt(c / n)};
}

Grid1D refined(const Grid1D& x, std::size_t k) { return Grid1D::nodes(x.lo(), x.hi(), k * (x.size() - 1) + 1); }

double order(double coarse, double fine) {
  return coarse < 1e-12 ? std::numeric_limits<double>::infinity() : std::log2(coarse / fine);
}

}  // namespace

void transform_roundtrip(Context& ctx) {
  const auto& c = ctx.config;
  auto& s = ctx.summary;
  const double min_order = c.tolerances.count("order") ? c.tolerance("order") : 2.0;
  const auto x = c.grid.x();
  const auto fg = c.grid.f();
  const auto dense = Grid1D::cdf(kDense);

  for (std::size_t i = 0; i < c.initial.size(); ++i) {
    const auto& p = c.initial[i];
    const std::string label = p.preset + "-" + std::to_string(i);
    const auto rho = p.make(x);
    const auto L = lorenz_map(rho, fg);
    const auto fine = p.make(refined(x, kRefine));

    const auto e = sup_errors(L, lorenz_map(fine, fg));
    s.check(label + ".slope", e.slope, c.tolerance("calculus"));
    s.check(label + ".curvature", e.curvature, c.tolerance("calculus"));
    s.check(label + ".roundtrip", rel_sup(density_from_lorenz(L, x).values(), rho.values()),
            c.tolerance("roundtrip"));

    // Grid doubling halves the node spacing.
    const auto ref = lorenz_map(fine, dense);
    const auto r1 = rms_errors(lorenz_map(rho, dense), ref);
    const auto r2 = rms_errors(lorenz_map(p.make(refined(x, 2)), dense), ref);
    const double os = order(r1.slope, r2.slope), oc = order(r1.curvature, r2.curvature);
    s.metrics[label + ".slope_rms"] = r1.slope;
    s.metrics[label + ".slope_rms_refined"] = r2.slope;
    s.metrics[label + ".curvature_rms"] = r1.curvature;
    s.metrics[label + ".curvature_rms_refined"] = r2.curvature;
    s.metrics[label + ".slope_order"] = os;
    s.metrics[label + ".curvature_order"] = oc;
    // Checked at the two decimals orders are quoted with; exact at both
    // resolutions (uniform density) means nothing to converge.
    auto quoted = [](double v) { return std::round(v * 100.0) / 100.0; };
    if (std::isfinite(os)) s.check(label + ".slope_order", quoted(os), min_order, Comparison::at_least);
    if (std::isfinite(oc)) s.check(label + ".curvature_order", quoted(oc), min_order, Comparison::at_least);

    if (ctx.persist()) {
      DensityTrajectory dt;
      dt.times = {0.0};
      dt.states = {rho};
      LorenzTrajectory lt;
      lt.times = {0.0};
      lt.states = {L};
      ctx.write("density-" + label + ".csv", trajectory_csv(dt));
      ctx.write("lorenz-" + label + ".csv", trajectory_csv(lt));
    }
  }
}

}  // namespace lorenzflow::cli::detail
