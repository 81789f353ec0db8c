#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "gmla/expr_error.hpp"
#include "gmla/grid.hpp"
#include "gmla/jet.hpp"

namespace gmla {

using Complex = std::complex<double>;

enum class SymbolKind {
  Const,
  X,
  Xi,
  Bracket,      // <z>^m = (1 + x^2 + xi^2)^(m/2), real m
  GaussZ,       // exp(-|z|^2)
  ConeCutoff,   // smooth radial ramp x angular plateau over a cone
  Sum,
  Product,
  Power,        // integer power (may be negative)
  Deriv,        // explicit partial derivative of an opaque primitive
};

enum class ConeProfile {
  Bump,     // exact plateau/support built from the exp(-1/t) step
  Sigmoid,  // analytic logistic profile (used by the cone filter)
};

struct ConeCutoffParams {
  double thetaLo = 0.0;
  double thetaHi = 0.0;
  double R = 1.0;        // radial ramp start
  double wAngle = 0.0;   // angular transition width (Bump)
  double wRadial = 1.0;  // radial transition width
  ConeProfile profile = ConeProfile::Bump;
  double lambda = 0.0;   // logistic steepness (Sigmoid)
};

struct SymbolExpr;
using SymPtr = std::shared_ptr<const SymbolExpr>;

struct SymbolExpr {
  SymbolKind kind;
  Complex cval{0.0, 0.0};
  double m = 0.0;  // Bracket exponent
  ConeCutoffParams cone;
  int ipow = 0;          // Power exponent
  int ax = 0, axi = 0;   // Deriv orders
  std::vector<SymPtr> kids;

  // Lazily built derivative ASTs (single-threaded construction).
  mutable SymPtr dxCache, dxiCache;
};

SymPtr symConst(Complex v);
SymPtr symX();
SymPtr symXi();
SymPtr symBracket(double m);
SymPtr symGaussZ();
// Bump cutoff: exactly 1 for |z| >= R + wRadial and angle within
// [lo + wAngle, hi - wAngle]; exactly 0 outside the cone or for |z| <= R.
SymPtr coneCutoffSymbol(const Cone& cone, double wAngle, double wRadial);
// Analytic logistic cutoff; value 1/2 on the cone edges, ~1 deep inside.
SymPtr coneSigmoidSymbol(const Cone& cone, double wRadial, double lambda);
SymPtr symSum(std::vector<SymPtr> kids);
SymPtr symProduct(std::vector<SymPtr> kids);
SymPtr symPower(SymPtr base, int k);
SymPtr symDeriv(SymPtr base, int ax, int axi);

SymPtr parseSymbol(const std::string& text);
std::string prettyPrint(const SymPtr& e);
bool equal(const SymPtr& a, const SymPtr& b);

// Declared Shubin order, computed structurally (sum: max, product: add,
// power: multiply). Schwartz-class primitives report -infinity.
double declaredOrder(const SymPtr& e);

bool isPolynomial(const SymPtr& e);
int polyDegree(const SymPtr& e);

// d/dx (var == 0) or d/dxi (var == 1) as an AST; exact symbolic rules for
// closed-form primitives, Deriv wrappers for cone cutoffs.
SymPtr derivative(const SymPtr& e, int var);
// \partial_x^ax \partial_xi^axi e as an AST.
SymPtr derivativeAlpha(const SymPtr& e, int ax, int axi);

Complex evalSymbol(const SymPtr& e, double x, double xi);
// Value of \partial_x^ax \partial_xi^axi e at (x, xi).
Complex evalSymbolDeriv(const SymPtr& e, int ax, int axi, double x, double xi);

// Jet (truncated Taylor) evaluation of a cone cutoff; exposed for tests.
Jet2 coneCutoffJet(const ConeCutoffParams& p, double x, double xi, int order);

}  // namespace gmla
