#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

namespace lorenzflow::cli {

namespace {

constexpr double kWidth = 720, kPanel = 340, kMarginL = 70, kMarginR = 20, kMarginT = 40, kGap = 60;
constexpr std::size_t kMaxSnapshots = 12;

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Dark blue -> teal -> yellow.
std::string colour(double s) {
  const double stops[3][3] = {{68, 1, 84}, {33, 145, 140}, {253, 231, 37}};
  s = std::clamp(s, 0.0, 1.0) * 2.0;
  const int k = s >= 1.0 ? 1 : 0;
  const double u = s - k;
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(stops[k][0] + u * (stops[k + 1][0] - stops[k][0]))),
                static_cast<int>(std::lround(stops[k][1] + u * (stops[k + 1][1] - stops[k][1]))),
                static_cast<int>(std::lround(stops[k][2] + u * (stops[k + 1][2] - stops[k][2]))));
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool empty() const { return !(hi >= lo); }
  void pad() {
    if (empty()) lo = 0, hi = 1;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  }
};

std::vector<std::size_t> picked_rows(std::size_t n) {
  std::vector<std::size_t> rows;
  if (n <= kMaxSnapshots) {
    for (std::size_t k = 0; k < n; ++k) rows.push_back(k);
  } else {
    for (std::size_t k = 0; k < kMaxSnapshots; ++k) rows.push_back(k * (n - 1) / (kMaxSnapshots - 1));
  }
  return rows;
}

void panel(std::string& out, const std::vector<const NamedTable*>& tables, double top, const std::string& title,
           const std::string& xlabel, double tmin, double tmax) {
  Range xr, yr;
  for (const auto* t : tables) {
    for (double c : t->second.coordinates) xr.add(c);
    for (const auto& row : t->second.rows)
      for (double v : row) yr.add(v);
  }
  if (xlabel == "f") {
    xr.add(0.0);
    xr.add(1.0);
  } else {
    yr.add(0.0);
  }
  xr.pad();
  yr.pad();
  const double w = kWidth - kMarginL - kMarginR, h = kPanel;
  auto px = [&](double x) { return kMarginL + (x - xr.lo) / (xr.hi - xr.lo) * w; };
  auto py = [&](double y) { return top + h - (y - yr.lo) / (yr.hi - yr.lo) * h; };

  out += "<text x=\"" + fmt(kMarginL) + "\" y=\"" + fmt(top - 10) + "\" font-size=\"14\">" + title + "</text>\n";
  out += "<rect x=\"" + fmt(kMarginL) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) +
         "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = xr.lo + k * (xr.hi - xr.lo) / 4, yv = yr.lo + k * (yr.hi - yr.lo) / 4;
    out += "<text x=\"" + fmt(px(xv)) + "\" y=\"" + fmt(top + h + 16) + "\" font-size=\"11\" text-anchor=\"middle\">" +
           fmt(xv, "%.3g") + "</text>\n";
    out += "<text x=\"" + fmt(kMarginL - 6) + "\" y=\"" + fmt(py(yv) + 4) + "\" font-size=\"11\" text-anchor=\"end\">" +
           fmt(yv, "%.3g") + "</text>\n";
  }
  out += "<text x=\"" + fmt(kMarginL + w / 2) + "\" y=\"" + fmt(top + h + 34) +
         "\" font-size=\"12\" text-anchor=\"middle\">" + xlabel + "</text>\n";

  for (const auto* t : tables) {
    const auto& tab = t->second;
    for (std::size_t k : picked_rows(tab.rows.size())) {
      const double s = tmax > tmin ? (tab.times[k] - tmin) / (tmax - tmin) : 0.0;
      out += "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"" + colour(s) + "\" points=\"";
      for (std::size_t i = 0; i < tab.coordinates.size(); ++i) {
        const double v = tab.rows[k][i];
        if (!std::isfinite(v)) continue;
        out += fmt(px(tab.coordinates[i])) + "," + fmt(py(v)) + " ";
      }
      out += "\"/>\n";
    }
  }
  if (tables.empty())
    out += "<text x=\"" + fmt(kMarginL + w / 2) + "\" y=\"" + fmt(top + h / 2) +
           "\" font-size=\"12\" text-anchor=\"middle\">no data</text>\n";
}

}  // namespace

std::string render_svg(const std::vector<NamedTable>& tables) {
  std::vector<const NamedTable*> dens, lor;
  double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin;
  for (const auto& t : tables) {
    (t.second.side == Side::density ? dens : lor).push_back(&t);
    for (double v : t.second.times) tmin = std::min(tmin, v), tmax = std::max(tmax, v);
  }
  const double height = kMarginT + 2 * kPanel + kGap + 70;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth, "%.0f") + "\" height=\"" +
                    fmt(height, "%.0f") + "\" font-family=\"sans-serif\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  auto names = [](const std::vector<const NamedTable*>& ts) {
    std::string s;
    for (const auto* t : ts) s += (s.empty() ? "  [" : ", ") + t->first;
    return s.empty() ? s : s + "]";
  };
  panel(out, dens, kMarginT, "density" + names(dens), "x", tmin, tmax);
  panel(out, lor, kMarginT + kPanel + kGap, "Lorenz curve" + names(lor), "f", tmin, tmax);
  if (std::isfinite(tmin))
    out += "<text x=\"" + fmt(kWidth - kMarginR) + "\" y=\"" + fmt(height - 10) +
           "\" font-size=\"11\" text-anchor=\"end\">time " + fmt(tmin, "%.4g") + " (dark) to " + fmt(tmax, "%.4g") +
           " (light)</text>\n";
  out += "</svg>\n";
  return out;
}

std::string plot_run(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) fail(ErrorKind::MissingInput, "run directory '" + dir + "' does not exist");
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (e.path().extension() == ".csv" && (name.rfind("density-", 0) == 0 || name.rfind("lorenz-", 0) == 0))
      files.push_back(name);
  }
  if (files.empty()) fail(ErrorKind::MissingInput, "no trajectory CSVs in '" + dir + "'");
  std::sort(files.begin(), files.end());
  std::vector<NamedTable> tables;
  for (const auto& f : files) {
    auto t = parse_trajectory_csv(read_file((fs::path(dir) / f).string()));
    if (!t.rows.empty()) tables.emplace_back(fs::path(f).stem().string(), std::move(t));
  }
  if (tables.empty()) fail(ErrorKind::MissingInput, "trajectory CSVs in '" + dir + "' have no snapshots");
  const auto path = (fs::path(dir) / "plot.svg").string();
  write_file(path, render_svg(tables));
  return path;
}

}  // namespace lorenzflow::cli
