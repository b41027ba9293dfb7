#pragma once

#include <functional>
#include <string>
#include <vector>

#include "density.hpp"
#include "functionals.hpp"
#include "lorenz.hpp"

namespace lorenzflow {

enum class StructureTag { W2, W2M, Crho, CD };
std::string_view to_string(StructureTag tag);

// m(rho) in the mobility M = m(rho) rho.
struct Mobility {
  std::string name = "one";
  std::function<double(double)> m = [](double) { return 1.0; };
};

// d(x, rho) in D = d(x, rho) rho.
struct Diffusivity {
  std::string name = "one";
  std::function<double(double, double)> d = [](double, double) { return 1.0; };
};

struct GradientStructure {
  StructureTag tag = StructureTag::W2;
  Mobility mobility;
  Diffusivity diffusivity;

  static GradientStructure W2() { return {StructureTag::W2, {}, {}}; }
  static GradientStructure W2M(Mobility m) { return {StructureTag::W2M, std::move(m), {}}; }
  static GradientStructure Crho() { return {StructureTag::Crho, {}, {}}; }
  static GradientStructure CD(Diffusivity d) { return {StructureTag::CD, {}, std::move(d)}; }

  bool transport_type() const { return tag == StructureTag::W2 || tag == StructureTag::W2M; }
  // Gauge of density-side derivatives under this structure.
  Gauge density_gauge() const { return transport_type() ? Gauge::modulo_constant : Gauge::modulo_affine; }
  std::string name() const;

  // Coefficients on either side; the Lorenz twins substitute x -> L_f and
  // rho -> 1/L_ff.
  double m(double rho) const;
  double d(double x, double rho) const;
};

struct OnsagerDiagnostics {
  double moment_leak = 0.0;      // density CD: int x K[u] lost through the boundary
  double slope_residual_0 = 0.0;  // lorenz W2/W2M: psi'(0)
  double slope_residual_1 = 0.0;  // lorenz W2/W2M: psi'(1)
};

// Raw Onsager operators. Density side: -d_x(M d_x u) or d_xx(D d_xx u) by
// conservative differences with zero flux at the truncation edges. Lorenz
// side: -int_0^f m int_0^g u, or d (L_ff)^-2 u.
TangentVector onsager_apply(const GradientStructure& S, const Density& rho, const FrechetDerivative& u,
                            OnsagerDiagnostics* diag = nullptr);
TangentVector onsager_apply(const GradientStructure& S, const LorenzCurve& L, const FrechetDerivative& u,
                            OnsagerDiagnostics* diag = nullptr);

inline constexpr double kMomentLeakTolerance = 1e-6;

TangentVector grad_density(const GradientStructure& S, const Functional& F, const Density& rho,
                           OnsagerDiagnostics* diag = nullptr);
TangentVector grad_lorenz(const GradientStructure& S, const Functional& F, const LorenzCurve& L,
                          OnsagerDiagnostics* diag = nullptr);

// Riemannian metric of S at the given state.
double metric_pairing(const GradientStructure& S, const Density& rho, const TangentVector& a,
                      const TangentVector& b);
double metric_pairing(const GradientStructure& S, const LorenzCurve& L, const TangentVector& a,
                      const TangentVector& b);

}  // namespace lorenzflow
