#include "lorenzflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "lorenzflow/errors.hpp"

namespace lorenzflow {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int p = 15; p <= 17; ++p) {
    std::snprintf(buf, sizeof buf, "%.*g", p, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace {

std::string grid_comment(const Grid1D& g) {
  return "# grid lo=" + format_number(g.lo()) + " hi=" + format_number(g.hi()) +
         " n=" + std::to_string(g.size()) + " centered=" + (g.is_centered() ? "1" : "0") + "\n";
}

// key=value pairs from '#' lines, keyed "<first word>.<key>".
struct CsvDoc {
  std::map<std::string, std::string> meta;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(ErrorKind::InvalidArgument, "not a number: '" + s + "'");
  }
  if (used != s.size()) fail(ErrorKind::InvalidArgument, "not a number: '" + s + "'");
  return v;
}

CsvDoc parse_csv(const std::string& text) {
  CsvDoc doc;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string section, tok;
      ls >> section;
      if (section.find('=') != std::string::npos) {
        const auto eq = section.find('=');
        doc.meta[section.substr(0, eq)] = section.substr(eq + 1);
        continue;
      }
      while (ls >> tok) {
        const auto eq = tok.find('=');
        if (eq != std::string::npos) doc.meta[section + "." + tok.substr(0, eq)] = tok.substr(eq + 1);
      }
      continue;
    }
    if (doc.header.empty()) {
      doc.header = split(line, ',');
      continue;
    }
    std::vector<double> row;
    for (const auto& cell : split(line, ',')) row.push_back(parse_double(cell));
    doc.rows.push_back(std::move(row));
  }
  return doc;
}

const std::string& meta(const CsvDoc& d, const std::string& key) {
  auto it = d.meta.find(key);
  if (it == d.meta.end()) fail(ErrorKind::MissingInput, "CSV metadata lacks '" + key + "'");
  return it->second;
}

Grid1D grid_from(double lo, double hi, std::size_t n, bool centered) {
  return centered ? Grid1D::centered(lo, hi, n) : Grid1D::nodes(lo, hi, n);
}

Grid1D grid_from_meta(const CsvDoc& d) {
  return grid_from(parse_double(meta(d, "grid.lo")), parse_double(meta(d, "grid.hi")),
                   static_cast<std::size_t>(std::stoul(meta(d, "grid.n"))), meta(d, "grid.centered") == "1");
}

TailClosure closure_from(const std::string& s) {
  if (s == "window") return TailClosure::window;
  if (s == "vanishing") return TailClosure::vanishing;
  fail(ErrorKind::InvalidArgument, "unknown tail closure '" + s + "'");
}

std::vector<double> column(const CsvDoc& d, std::size_t c) {
  std::vector<double> v;
  for (const auto& r : d.rows) {
    if (r.size() <= c) fail(ErrorKind::InvalidArgument, "short CSV row");
    v.push_back(r[c]);
  }
  return v;
}

json grid_json(const Grid1D& g) {
  return {{"lo", g.lo()}, {"hi", g.hi()}, {"n", g.size()}, {"centered", g.is_centered()}};
}

Grid1D grid_from_json(const json& j) {
  return grid_from(j.at("lo").get<double>(), j.at("hi").get<double>(), j.at("n").get<std::size_t>(),
                   j.at("centered").get<bool>());
}

std::string lorenz_comments(const LorenzCurve& L) {
  return "# side=lorenz\n" + grid_comment(L.grid()) + "# support lo=" + format_number(L.support().lo) +
         " hi=" + format_number(L.support().hi) + "\n# closure left=" +
         std::string(to_string(L.closure().left)) + " right=" + std::string(to_string(L.closure().right)) +
         "\n";
}

}  // namespace

std::string to_csv(const Density& rho) {
  std::string s = "# side=density\n" + grid_comment(rho.grid()) + "x,value\n";
  for (std::size_t i = 0; i < rho.size(); ++i)
    s += format_number(rho.grid()[i]) + "," + format_number(rho[i]) + "\n";
  return s;
}

std::string to_csv(const LorenzCurve& L) {
  std::string s = lorenz_comments(L) + "f,value\n";
  for (std::size_t j = 0; j < L.size(); ++j) s += format_number(L.grid()[j]) + "," + format_number(L[j]) + "\n";
  return s;
}

Density density_from_csv(const std::string& text) {
  const auto d = parse_csv(text);
  if (meta(d, "side") != "density") fail(ErrorKind::SideMismatch, "CSV does not hold a density");
  return Density(grid_from_meta(d), column(d, 1));
}

LorenzCurve lorenz_from_csv(const std::string& text) {
  const auto d = parse_csv(text);
  if (meta(d, "side") != "lorenz") fail(ErrorKind::SideMismatch, "CSV does not hold a Lorenz curve");
  const Support sup{parse_double(meta(d, "support.lo")), parse_double(meta(d, "support.hi"))};
  const TailClosures cl{closure_from(meta(d, "closure.left")), closure_from(meta(d, "closure.right"))};
  return LorenzCurve::from_values(grid_from_meta(d), column(d, 1), sup, cl);
}

std::string to_json(const Density& rho) {
  json j{{"side", "density"}, {"grid", grid_json(rho.grid())}, {"values", rho.values()}};
  return j.dump(1);
}

std::string to_json(const LorenzCurve& L) {
  json j{{"side", "lorenz"},
         {"grid", grid_json(L.grid())},
         {"values", L.values()},
         {"support", {{"lo", L.support().lo}, {"hi", L.support().hi}}},
         {"closure", {{"left", to_string(L.closure().left)}, {"right", to_string(L.closure().right)}}}};
  return j.dump(1);
}

Density density_from_json(const std::string& text) {
  try {
    const auto j = json::parse(text);
    if (j.at("side") != "density") fail(ErrorKind::SideMismatch, "JSON does not hold a density");
    return Density(grid_from_json(j.at("grid")), j.at("values").get<std::vector<double>>());
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("bad density JSON: ") + e.what());
  }
}

LorenzCurve lorenz_from_json(const std::string& text) {
  try {
    const auto j = json::parse(text);
    if (j.at("side") != "lorenz") fail(ErrorKind::SideMismatch, "JSON does not hold a Lorenz curve");
    Support sup;
    TailClosures cl;
    if (j.contains("support")) sup = {j["support"].at("lo").get<double>(), j["support"].at("hi").get<double>()};
    if (j.contains("closure"))
      cl = {closure_from(j["closure"].at("left").get<std::string>()),
            closure_from(j["closure"].at("right").get<std::string>())};
    return LorenzCurve::from_values(grid_from_json(j.at("grid")), j.at("values").get<std::vector<double>>(), sup,
                                    cl);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("bad Lorenz JSON: ") + e.what());
  }
}

namespace {

template <class State>
std::string wide_csv(const Trajectory<State>& t, const std::string& comments, const Grid1D& g) {
  std::string s = comments + "time";
  for (std::size_t i = 0; i < g.size(); ++i) s += "," + format_number(g[i]);
  s += "\n";
  for (std::size_t k = 0; k < t.times.size(); ++k) {
    s += format_number(t.times[k]);
    for (double v : t.states[k].values()) s += "," + format_number(v);
    s += "\n";
  }
  return s;
}

template <class State>
std::string diagnostics(const Trajectory<State>& t, Side side, const Grid1D& g) {
  json snaps = json::array();
  for (std::size_t k = 0; k < t.times.size(); ++k) {
    const auto& d = t.diagnostics[k];
    snaps.push_back({{"time", t.times[k]},
                     {"mass", d.mass},
                     {"first_moment", d.first_moment},
                     {"functional", d.functional},
                     {"clamp_count", d.clamp_count}});
  }
  double worst_increase = 0.0, worst_decrease = 0.0, mass_drift = 0.0, moment_drift = 0.0;
  for (std::size_t k = 1; k < t.steps.size(); ++k) {
    const double dF = t.steps[k].functional - t.steps[k - 1].functional;
    worst_increase = std::max(worst_increase, dF);
    worst_decrease = std::max(worst_decrease, -dF);
    mass_drift = std::max(mass_drift, std::abs(t.steps[k].mass - t.steps[0].mass));
    moment_drift = std::max(moment_drift, std::abs(t.steps[k].first_moment - t.steps[0].first_moment));
  }
  json j{{"side", to_string(side)},
         {"grid", grid_json(g)},
         {"snapshots", snaps},
         {"steps", t.steps.size() ? t.steps.size() - 1 : 0},
         {"max_mass_drift", mass_drift},
         {"max_first_moment_drift", moment_drift}};
  if (t.tracks_functional) {
    j["max_step_increase"] = worst_increase;
    j["max_step_decrease"] = worst_decrease;
  }
  return j.dump(1);
}

}  // namespace

std::string trajectory_csv(const DensityTrajectory& t) {
  const auto& g = t.states.front().grid();
  return wide_csv(t, "# side=density\n" + grid_comment(g), g);
}

std::string trajectory_csv(const LorenzTrajectory& t) {
  const auto& L = t.states.front();
  return wide_csv(t, lorenz_comments(L), L.grid());
}

std::string diagnostics_json(const DensityTrajectory& t) {
  return diagnostics(t, Side::density, t.states.front().grid());
}

std::string diagnostics_json(const LorenzTrajectory& t) {
  return diagnostics(t, Side::lorenz, t.states.front().grid());
}

TrajectoryTable parse_trajectory_csv(const std::string& text) {
  const auto d = parse_csv(text);
  TrajectoryTable t;
  const auto& side = meta(d, "side");
  if (side != "density" && side != "lorenz") fail(ErrorKind::InvalidArgument, "unknown side '" + side + "'");
  t.side = side == "density" ? Side::density : Side::lorenz;
  if (d.header.size() < 2 || d.header[0] != "time")
    fail(ErrorKind::InvalidArgument, "trajectory CSV needs a 'time' header column");
  for (std::size_t c = 1; c < d.header.size(); ++c) t.coordinates.push_back(parse_double(d.header[c]));
  for (const auto& r : d.rows) {
    if (r.size() != d.header.size()) fail(ErrorKind::InvalidArgument, "ragged trajectory row");
    t.times.push_back(r[0]);
    t.rows.emplace_back(r.begin() + 1, r.end());
  }
  return t;
}

std::string to_json(const EquivalenceReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) rows.push_back({{"time", row.time}, {"sup", row.sup}, {"l2", row.l2}});
  json j{{"rows", rows}, {"max_sup", r.max_sup}, {"max_l2", r.max_l2}, {"tolerance", r.tolerance}, {"pass", r.pass}};
  return j.dump(1);
}

std::string to_json(const IsometryReport& r) {
  auto transfer = [](const TransferCheck& t) {
    return json{{"source_action", t.source_action},
                {"transferred_action", t.transferred_action},
                {"relative_error", t.relative_error}};
  };
  json j{{"structure", r.structure},
         {"side_actions", {{"density", r.density_action}, {"lorenz", r.lorenz_action}}},
         {"transfer_errors",
          {{"lorenz_to_density", transfer(r.lorenz_to_density)},
           {"density_to_lorenz", transfer(r.density_to_lorenz)}}},
         {"tolerance", r.tolerance},
         {"pass", r.pass}};
  if (r.w2_closed_form_squared >= 0.0) j["w2_closed_form_squared"] = r.w2_closed_form_squared;
  return j.dump(1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::MissingInput, "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << contents;
}

}  // namespace lorenzflow
