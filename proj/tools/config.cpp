#include "config.hpp"

#include <set>

#include <json.hpp>

namespace lorenzflow::cli {

using nlohmann::json;

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::transform_roundtrip: return "transform-roundtrip";
    case ExperimentKind::flow_equivalence: return "flow-equivalence";
    case ExperimentKind::isometry: return "isometry";
    case ExperimentKind::gini_ascent: return "gini-ascent";
    case ExperimentKind::functional_audit: return "functional-audit";
  }
  return "unknown";
}

Density DensityPreset::make(const Grid1D& x) const {
  if (preset == "uniform") return uniform_density(x);
  if (preset == "truncated-gaussian") return truncated_gaussian(x, mu, sigma);
  if (preset == "lognormal-like") return lognormal_like(x, mu, sigma);
  fail(ErrorKind::ConfigError, "unknown density preset '" + preset + "'");
}

GradientStructure StructureConfig::make() const {
  if (tag == "w2") return GradientStructure::W2();
  if (tag == "w2m") return GradientStructure::W2M(mobility_preset(mobility, mobility_param));
  if (tag == "crho") return GradientStructure::Crho();
  if (tag == "cd") return GradientStructure::CD(diffusivity_preset(diffusivity, diffusivity_param));
  fail(ErrorKind::ConfigError, "unknown structure tag '" + tag + "'");
}

Functional FunctionalConfig::make(Side side) const {
  if (kind == "entropy") return Functional::entropy(side);
  if (kind == "gini") return Functional::gini_area(side);
  if (kind == "potential") {
    if (shape == "quadratic") return Functional::potential(quadratic_potential(scale), side);
    if (shape == "quartic") return Functional::potential(quartic_potential(scale), side);
  } else if (kind == "interaction") {
    if (shape == "quadratic") return Functional::interaction(quadratic_kernel(scale), side);
    if (shape == "gaussian") return Functional::interaction(gaussian_kernel(scale, width), side);
  } else {
    fail(ErrorKind::ConfigError, "unknown functional kind '" + kind + "'");
  }
  fail(ErrorKind::ConfigError, "unknown " + kind + " shape '" + shape + "'");
}

Dynamics DynamicsConfig::make() const {
  Dynamics d;
  d.name = drift + "/" + diffusion;
  if (drift == "ou")
    d.drift = [](double x, double, double, const FieldMoments&) { return -x; };
  else if (drift != "zero")
    fail(ErrorKind::ConfigError, "unknown drift preset '" + drift + "'");
  if (diffusion == "rho")
    d.diffusion = [](double, double, double r, const FieldMoments&) { return r; };
  else if (diffusion != "one")
    fail(ErrorKind::ConfigError, "unknown diffusion preset '" + diffusion + "'");
  return d;
}

double ExperimentConfig::tolerance(const std::string& key) const {
  const auto it = tolerances.find(key);
  if (it == tolerances.end()) fail(ErrorKind::ConfigError, "missing field 'tolerances." + key + "'");
  return it->second;
}

namespace {

// A JSON object with its dotted path, for error messages.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(ErrorKind::ConfigError, "field '" + where() + "' must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& at(const std::string& key) const {
    if (!has(key)) fail(ErrorKind::ConfigError, "missing field '" + field(key) + "'");
    return j_.at(key);
  }

  Node child(const std::string& key) const { return Node(at(key), field(key)); }

  template <class T>
  T get(const std::string& key) const {
    try {
      return at(key).get<T>();
    } catch (const json::exception&) {
      fail(ErrorKind::ConfigError, "field '" + field(key) + "' has the wrong type");
    }
  }

  template <class T>
  T get(const std::string& key, T fallback) const {
    return has(key) ? get<T>(key) : fallback;
  }

  double positive(const std::string& key) const {
    const double v = get<double>(key);
    if (!(v > 0.0)) fail(ErrorKind::ConfigError, "field '" + field(key) + "' must be positive");
    return v;
  }

  double positive(const std::string& key, double fallback) const { return has(key) ? positive(key) : fallback; }

  void only(std::initializer_list<const char*> keys) const {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : j_.items())
      if (!allowed.count(k)) fail(ErrorKind::ConfigError, "unknown field '" + field(k) + "'");
  }

  const json& raw() const { return j_; }

 private:
  std::string where() const { return path_.empty() ? "<root>" : path_; }
  const json& j_;
  std::string path_;
};

ExperimentKind kind_from(const std::string& s) {
  if (s == "transform-roundtrip") return ExperimentKind::transform_roundtrip;
  if (s == "flow-equivalence") return ExperimentKind::flow_equivalence;
  if (s == "isometry") return ExperimentKind::isometry;
  if (s == "gini-ascent") return ExperimentKind::gini_ascent;
  if (s == "functional-audit") return ExperimentKind::functional_audit;
  fail(ErrorKind::ConfigError, "field 'experiment' has unknown value '" + s + "'");
}

RhsKind rhs_from(const std::string& s, const std::string& field) {
  if (s == "gradient_flow") return RhsKind::gradient_flow;
  if (s == "mvfpe") return RhsKind::mvfpe;
  if (s == "lorenz_pde") return RhsKind::lorenz_pde;
  fail(ErrorKind::ConfigError, "field '" + field + "' has unknown value '" + s + "'");
}

DensityPreset preset_from(const Node& n) {
  n.only({"preset", "mu", "sigma"});
  DensityPreset p;
  p.preset = n.get<std::string>("preset");
  p.mu = n.get<double>("mu", 0.0);
  p.sigma = n.positive("sigma", 1.0);
  return p;
}

StructureConfig structure_from(const Node& n) {
  n.only({"tag", "mobility", "mobility_param", "diffusivity", "diffusivity_param"});
  StructureConfig s;
  s.tag = n.get<std::string>("tag");
  s.mobility = n.get<std::string>("mobility", s.mobility);
  s.mobility_param = n.get<double>("mobility_param", s.mobility_param);
  s.diffusivity = n.get<std::string>("diffusivity", s.diffusivity);
  s.diffusivity_param = n.get<double>("diffusivity_param", s.diffusivity_param);
  s.make();  // validates names
  return s;
}

FunctionalConfig functional_from(const Node& n) {
  n.only({"kind", "shape", "scale", "width"});
  FunctionalConfig f;
  f.kind = n.get<std::string>("kind");
  f.shape = n.get<std::string>("shape", f.shape);
  f.scale = n.get<double>("scale", f.scale);
  f.width = n.positive("width", f.width);
  f.make(Side::density);
  return f;
}

DynamicsConfig dynamics_from(const Node& n) {
  DynamicsConfig d;
  d.drift = n.get<std::string>("drift", d.drift);
  d.diffusion = n.get<std::string>("diffusion", d.diffusion);
  d.make();
  return d;
}

template <class Fn>
auto list_of(const Node& parent, const std::string& key, Fn&& item) {
  const auto& arr = parent.at(key);
  if (!arr.is_array() || arr.empty())
    fail(ErrorKind::ConfigError, "field '" + parent.field(key) + "' must be a nonempty array");
  std::vector<decltype(item(std::declval<Node>()))> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(item(Node(arr[i], parent.field(key) + "[" + std::to_string(i) + "]")));
  return out;
}

FlowConfig flow_from(const Node& n) {
  n.only({"dt", "t_end", "stride", "cfl", "direction", "density", "lorenz", "side", "refine"});
  FlowConfig f;
  f.dt = n.positive("dt");
  f.t_end = n.positive("t_end");
  f.stride = n.get<std::size_t>("stride", 1);
  if (f.stride == 0) fail(ErrorKind::ConfigError, "field '" + n.field("stride") + "' must be positive");
  f.cfl = n.positive("cfl", f.cfl);
  const auto dir = n.get<std::string>("direction", "descent");
  if (dir != "descent" && dir != "ascent")
    fail(ErrorKind::ConfigError, "field '" + n.field("direction") + "' must be ascent or descent");
  f.direction = dir == "ascent" ? Direction::ascent : Direction::descent;
  if (n.has("density")) {
    const auto d = n.child("density");
    d.only({"rhs", "drift", "diffusion"});
    f.density_rhs = rhs_from(d.get<std::string>("rhs", "gradient_flow"), d.field("rhs"));
    if (f.density_rhs == RhsKind::lorenz_pde)
      fail(ErrorKind::ConfigError, "field '" + d.field("rhs") + "' cannot be lorenz_pde");
    f.density_dynamics = dynamics_from(d);
  }
  if (n.has("lorenz")) {
    const auto l = n.child("lorenz");
    l.only({"rhs", "drift", "diffusion"});
    f.lorenz_rhs = rhs_from(l.get<std::string>("rhs", "gradient_flow"), l.field("rhs"));
    if (f.lorenz_rhs == RhsKind::mvfpe) fail(ErrorKind::ConfigError, "field '" + l.field("rhs") + "' cannot be mvfpe");
    f.lorenz_dynamics = dynamics_from(l);
  }
  const auto side = n.get<std::string>("side", "lorenz");
  if (side != "lorenz" && side != "density")
    fail(ErrorKind::ConfigError, "field '" + n.field("side") + "' must be density or lorenz");
  f.side = side == "density" ? Side::density : Side::lorenz;
  f.refine = n.get<bool>("refine", false);
  return f;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  const Node root(j, "");
  root.only({"name", "experiment", "seed", "output_dir", "grid", "initial", "structure", "functional", "flow",
             "isometry", "audit", "tolerances"});
  ExperimentConfig c;
  c.name = root.get<std::string>("name");
  if (c.name.empty() || c.name.find('/') != std::string::npos)
    fail(ErrorKind::ConfigError, "field 'name' must be a nonempty file name");
  c.kind = kind_from(root.get<std::string>("experiment"));
  c.seed = root.get<std::uint64_t>("seed", 0);
  c.output_dir = root.get<std::string>("output_dir", c.name);

  const auto grid = root.child("grid");
  grid.only({"lo", "hi", "n", "cdf_n"});
  c.grid.lo = grid.get<double>("lo");
  c.grid.hi = grid.get<double>("hi");
  if (!(c.grid.hi > c.grid.lo)) fail(ErrorKind::ConfigError, "field 'grid.hi' must exceed 'grid.lo'");
  c.grid.n = grid.get<std::size_t>("n");
  if (c.grid.n < 8) fail(ErrorKind::ConfigError, "field 'grid.n' must be at least 8");
  c.grid.cdf_n = grid.get<std::size_t>("cdf_n", 0);

  const auto tol = root.child("tolerances");
  for (const auto& [k, v] : tol.raw().items()) c.tolerances[k] = tol.positive(k);

  if (root.has("structure")) c.structure = structure_from(root.child("structure"));
  if (root.has("functional")) {
    c.functional = functional_from(root.child("functional"));
    c.functional_given = true;
  }

  auto require_tolerances = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys) c.tolerance(k);
  };

  switch (c.kind) {
    case ExperimentKind::transform_roundtrip:
      c.initial = list_of(root, "initial", preset_from);
      require_tolerances({"roundtrip", "calculus"});
      break;
    case ExperimentKind::flow_equivalence:
    case ExperimentKind::gini_ascent:
      c.initial = {preset_from(root.child("initial"))};
      c.flow = flow_from(root.child("flow"));
      if (c.kind == ExperimentKind::flow_equivalence) {
        require_tolerances({"equivalence", "monotonicity", "mass"});
        if (c.flow.density_rhs == RhsKind::gradient_flow && !c.functional_given)
          fail(ErrorKind::ConfigError, "missing field 'functional'");
      } else {
        require_tolerances({"monotonicity"});
        c.functional = FunctionalConfig{"gini"};
        if (!root.has("structure")) c.structure.tag = "cd";
        c.flow.direction = Direction::ascent;
        c.functional_given = true;
      }
      if (c.flow.refine) require_tolerances({"refinement_ratio"});
      break;
    case ExperimentKind::isometry: {
      const auto iso = root.child("isometry");
      iso.only({"pairs", "structures", "K", "iterations"});
      c.isometry.pairs = list_of(iso, "pairs", [](const Node& p) {
        p.only({"from", "to"});
        return std::make_pair(preset_from(p.child("from")), preset_from(p.child("to")));
      });
      c.isometry.structures = list_of(iso, "structures", structure_from);
      c.isometry.K = iso.get<std::size_t>("K", 32);
      c.isometry.iterations = iso.get<std::size_t>("iterations", 50);
      require_tolerances({"transfer", "closed_form", "no_improvement"});
      break;
    }
    case ExperimentKind::functional_audit: {
      c.initial = {preset_from(root.child("initial"))};
      const auto a = root.child("audit");
      a.only({"structures", "functionals", "tangents", "epsilon", "support"});
      c.audit.structures = list_of(a, "structures", structure_from);
      c.audit.functionals = list_of(a, "functionals", functional_from);
      c.audit.tangents = a.get<std::size_t>("tangents", 20);
      c.audit.epsilon = a.positive("epsilon", 1e-4);
      if (a.has("support")) {
        const auto s = a.get<std::vector<double>>("support");
        if (s.size() != 2 || !(s[1] > s[0]))
          fail(ErrorKind::ConfigError, "field 'audit.support' must be [lo, hi] with lo < hi");
        c.audit.support_lo = s[0];
        c.audit.support_hi = s[1];
      }
      require_tolerances({"frechet", "gradient"});
      break;
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

}  // namespace lorenzflow::cli
