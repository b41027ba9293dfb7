#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <json.hpp>

#include "experiment_detail.hpp"
#include "plot.hpp"

namespace lorenzflow::cli {

bool Summary::pass() const {
  return !assertions.empty() &&
         std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

void Summary::check(std::string name, double value, double tolerance, Comparison c) {
  // NaN never passes.
  const bool ok = c == Comparison::at_most ? value <= tolerance : value >= tolerance;
  assertions.push_back({std::move(name), value, tolerance, c, ok});
}

std::string output_root() {
  const char* env = std::getenv("LORENZFLOW_OUTPUT_ROOT");
  return env && *env ? env : "runs";
}

namespace detail {

void Context::write(const std::string& name, const std::string& contents) const {
  if (!persist()) return;
  write_file((dir / name).string(), contents);
  summary.artifacts.push_back(name);
}

double rel_sup(const std::vector<double>& a, const std::vector<double>& b) {
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    err = std::max(err, std::abs(a[i] - b[i]));
    scale = std::max(scale, std::abs(b[i]));
  }
  return scale > 0.0 ? err / scale : err;
}

}  // namespace detail

Summary run_experiment(const ExperimentConfig& config, Mode mode, const std::string& root) {
  Summary s;
  s.name = config.name;
  s.kind = config.kind;
  s.seed = config.seed;
  detail::Context ctx{config, mode, std::filesystem::path(root) / config.output_dir, s};
  if (ctx.persist()) std::filesystem::create_directories(ctx.dir);

  try {
    switch (config.kind) {
      case ExperimentKind::transform_roundtrip: detail::transform_roundtrip(ctx); break;
      case ExperimentKind::flow_equivalence: detail::flow_equivalence(ctx); break;
      case ExperimentKind::gini_ascent: detail::gini_ascent(ctx); break;
      case ExperimentKind::isometry: detail::isometry(ctx); break;
      case ExperimentKind::functional_audit: detail::functional_audit(ctx); break;
    }
  } catch (const Error& e) {
    std::string msg = std::string(to_string(config.kind)) + " '" + config.name + "': " + e.what();
    throw Error(e.kind(), msg, e.time());
  }

  if (ctx.persist()) {
    // Decoration only: a failed plot never changes the outcome.
    try {
      plot_run(ctx.dir.string());
      s.artifacts.push_back("plot.svg");
    } catch (const Error&) {
    }
    std::sort(s.artifacts.begin(), s.artifacts.end());
  }
  ctx.summary.artifacts.push_back("summary.json");
  write_file((ctx.dir / "summary.json").string(), summary_json(s));
  return s;
}

std::string summary_json(const Summary& s) {
  using nlohmann::json;
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json j;
  j["name"] = s.name;
  j["experiment"] = std::string(to_string(s.kind));
  j["seed"] = s.seed;
  j["pass"] = s.pass();
  j["assertions"] = json::array();
  for (const auto& a : s.assertions)
    j["assertions"].push_back({{"name", a.name},
                               {"value", num(a.value)},
                               {"tolerance", num(a.tolerance)},
                               {"comparison", a.comparison == Comparison::at_most ? "<=" : ">="},
                               {"pass", a.pass}});
  j["metrics"] = json::object();
  for (const auto& [k, v] : s.metrics) j["metrics"][k] = num(v);
  j["series"] = json::object();
  for (const auto& [k, v] : s.series) {
    auto& arr = j["series"][k] = json::array();
    for (double x : v) arr.push_back(num(x));
  }
  j["artifacts"] = s.artifacts;
  return j.dump(2) + "\n";
}

}  // namespace lorenzflow::cli
