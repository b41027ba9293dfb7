#pragma once

#include <string>
#include <vector>

#include "density.hpp"
#include "flows.hpp"
#include "lorenz.hpp"
#include "metrics.hpp"

namespace lorenzflow {

// Shortest round-trip decimal form.
std::string format_number(double v);

// Two-column CSV: '#' comment lines carry side and grid metadata, then a
// header row "x,value" or "f,value".
std::string to_csv(const Density& rho);
std::string to_csv(const LorenzCurve& L);
Density density_from_csv(const std::string& text);
LorenzCurve lorenz_from_csv(const std::string& text);

// JSON envelope {side, grid:{lo,hi,n,centered}, values:[...]}; Lorenz curves
// also carry support and tail closures.
std::string to_json(const Density& rho);
std::string to_json(const LorenzCurve& L);
Density density_from_json(const std::string& text);
LorenzCurve lorenz_from_json(const std::string& text);

// Wide trajectory CSV: one row per snapshot, "time" then one column per node
// (column names are the node coordinates).
std::string trajectory_csv(const DensityTrajectory& t);
std::string trajectory_csv(const LorenzTrajectory& t);
std::string diagnostics_json(const DensityTrajectory& t);
std::string diagnostics_json(const LorenzTrajectory& t);

struct TrajectoryTable {
  Side side = Side::density;
  std::vector<double> coordinates;
  std::vector<double> times;
  std::vector<std::vector<double>> rows;
};
TrajectoryTable parse_trajectory_csv(const std::string& text);

std::string to_json(const EquivalenceReport& r);
std::string to_json(const IsometryReport& r);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace lorenzflow
