#pragma once

#include <string>
#include <utility>
#include <vector>

#include <lorenzflow/lorenzflow.hpp>

namespace lorenzflow::cli {

using NamedTable = std::pair<std::string, TrajectoryTable>;

// Two panels: density snapshots over x on top, Lorenz snapshots over f below,
// coloured by time. Pure function of its input.
std::string render_svg(const std::vector<NamedTable>& tables);

// Reads every density-*.csv and lorenz-*.csv in dir and writes dir/plot.svg.
// Throws MissingInput when there is nothing to plot.
std::string plot_run(const std::string& dir);

}  // namespace lorenzflow::cli
