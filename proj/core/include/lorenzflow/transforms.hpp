#pragma once

#include <vector>

#include "density.hpp"
#include "lorenz.hpp"

namespace lorenzflow {

// All transforms read rho as piecewise linear between nodes, so the cdf is
// piecewise quadratic and is inverted exactly cell by cell.

Cdf cdf(const Density& rho);

InverseCdf inverse_cdf(const Density& rho, const Grid1D& fgrid);

// Tail closure implied by rho at each end: vanishing if the edge value is
// below tail_tol * max(rho), window otherwise.
TailClosures tail_closures(const Density& rho, double tail_tol = kTailTolerance);

// L(f) = int_lo^G(f) y rho(y) dy with exact caches L_f = G, L_ff = 1/rho(G).
LorenzCurve lorenz_map(const Density& rho, const Grid1D& fgrid);

// Inverse transform: support points x = L_f, values 1/L_ff, resampled on
// xgrid. Mass and first moment are matched to 1 and L(1).
Density density_from_lorenz(const LorenzCurve& L, const Grid1D& xgrid);

// Quadrature for int_0^1 phi(L_f(f)) df ~ sum_q weight_q phi(x_q), built on
// the same reconstruction of rho as density_from_lorenz (Hermite cdf through
// the samples plus tail closures).
Quadrature lorenz_quadrature(const LorenzCurve& L);

// Variation of G under rho -> rho + eps h: -(int^G h) / rho(G).
std::vector<double> dt_inverse_cdf(const Density& rho, const std::vector<double>& h,
                                   const Grid1D& fgrid);

// Variation of L: int^G y h - G int^G h.
TangentVector dt_lorenz(const Density& rho, const std::vector<double>& h, const Grid1D& fgrid);

}  // namespace lorenzflow
