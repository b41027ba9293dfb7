#pragma once

#include <random>
#include <string>
#include <vector>

#include "density.hpp"
#include "functionals.hpp"
#include "geometry.hpp"

namespace lorenzflow {

Density uniform_density(const Grid1D& x);
Density truncated_gaussian(const Grid1D& x, double mu, double sigma);
// rho(x) ~ exp(-(log x - mu)^2 / (2 sigma^2)) / x on x > 0.
Density lognormal_like(const Grid1D& x, double mu, double sigma);
// Same nodal values on the grid shifted by c.
Density translate(const Density& rho, double c);

// Mobility presets: one, rho, saturating (1/(1+rho)), power (rho^p).
Mobility mobility_preset(const std::string& name, double p = 1.0);
// Diffusivity presets: one, quadratic (1 + a x^2).
Diffusivity diffusivity_preset(const std::string& name, double a = 0.5);

ScalarField quadratic_potential(double scale = 1.0);   // scale * x^2
ScalarField quartic_potential(double scale = 1.0);     // scale * x^4 / 4
Kernel quadratic_kernel(double scale = 1.0);            // scale * (x - y)^2 / 2
Kernel gaussian_kernel(double scale = 1.0, double width = 1.0);

// Smooth perturbation supported (to double precision) inside [a, b], with
// zero mass and, if requested, zero first moment on the density grid.
std::vector<double> random_perturbation(const Grid1D& x, double a, double b, std::mt19937_64& rng,
                                        bool moment_constrained);

}  // namespace lorenzflow
