#pragma once

#include "lorenzflow/density.hpp"
#include "lorenzflow/errors.hpp"
#include "lorenzflow/flows.hpp"
#include "lorenzflow/functionals.hpp"
#include "lorenzflow/geometry.hpp"
#include "lorenzflow/grid.hpp"
#include "lorenzflow/io.hpp"
#include "lorenzflow/lorenz.hpp"
#include "lorenzflow/metrics.hpp"
#include "lorenzflow/presets.hpp"
#include "lorenzflow/transforms.hpp"
