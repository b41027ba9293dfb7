#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "density.hpp"
#include "lorenz.hpp"

namespace lorenzflow {

struct ScalarField {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  // Optional; central differences of `derivative` when empty.
  std::function<double(double)> second = {};
};

// Symmetric pair kernel W(x, y) with its partial derivatives in x.
struct Kernel {
  std::string name;
  std::function<double(double, double)> value;
  std::function<double(double, double)> d1;
  // Optional; central differences of d1 when empty.
  std::function<double(double, double)> d11 = {};
};

enum class FunctionalKind { potential, interaction, boltzmann_entropy, gini_area, linear_combination };
std::string_view to_string(FunctionalKind kind);

struct FunctionalTerm;

class Functional {
 public:
  static Functional potential(ScalarField V, Side side = Side::density);
  static Functional interaction(Kernel W, Side side = Side::density);
  static Functional entropy(Side side = Side::density);
  static Functional gini_area(Side side = Side::density);
  static Functional combination(std::vector<FunctionalTerm> terms);

  // The same functional expressed on the other side of the transform.
  Functional twin() const;

  Side side() const { return side_; }
  FunctionalKind kind() const { return kind_; }
  std::string name() const;
  const ScalarField& field() const { return *field_; }
  const Kernel& kernel() const { return *kernel_; }
  const std::vector<FunctionalTerm>& terms() const { return terms_; }

 private:
  Functional(FunctionalKind kind, Side side) : kind_(kind), side_(side) {}
  FunctionalKind kind_;
  Side side_;
  std::shared_ptr<const ScalarField> field_;
  std::shared_ptr<const Kernel> kernel_;
  std::vector<FunctionalTerm> terms_;
};

struct FunctionalTerm {
  double weight;
  Functional functional;
};

enum class Gauge { modulo_constant, modulo_affine, absolute };
std::string_view to_string(Gauge gauge);

struct FrechetDerivative {
  Side side = Side::density;
  Grid1D grid = Grid1D::cdf(8);
  std::vector<double> values;
  Gauge gauge = Gauge::modulo_constant;
  // Lorenz side: an antiderivative I with I' = values that carries the
  // functional's natural integration constant (I = -V'(L_f) for a
  // potential, -d/df(1/L_ff) for the entropy, 1/2 - f for the Gini area,
  // which accounts for the dependence on L(1)).
  std::optional<std::vector<double>> antiderivative;
};

double eval(const Functional& F, const Density& rho);
double eval(const Functional& F, const LorenzCurve& L);

FrechetDerivative frechet(const Functional& F, const Density& rho);
FrechetDerivative frechet(const Functional& F, const LorenzCurve& L);

// Density-side derivative induced by a Lorenz-side one through the transform,
// constant fixed to zero at the left end.
//   x-form: -int^x dy int^y du rho(u) dF(C(u))          (on rho's grid)
//   f-form: -int_0^f dg L_ff(g) int_0^g dF              (at x = G(f_j))
FrechetDerivative cov_frechet(const FrechetDerivative& dF, const Density& rho);
std::vector<double> cov_frechet_fform(const FrechetDerivative& dF, const LorenzCurve& L);

// Removes the gauge freedom: subtracts the weighted mean (modulo_constant)
// or the weighted least-squares affine fit (modulo_affine).
std::vector<double> gauge_project(const std::vector<double>& xs, const std::vector<double>& values,
                                  const std::vector<double>& weights, Gauge gauge);
std::vector<double> gauge_project(const Grid1D& g, const std::vector<double>& values, Gauge gauge);

}  // namespace lorenzflow
