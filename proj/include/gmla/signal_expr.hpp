#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "gmla/expr_error.hpp"
#include "gmla/grid.hpp"

namespace gmla {

using Complex = std::complex<double>;

enum class SignalKind {
  Const,        // scalar literal
  Gauss,        // time-frequency shifted normalized Gaussian, params (x0, xi0)
  Chirp,        // exp(i c x^2 / 2), param c
  Planewave,    // exp(i x xi0), param xi0
  DeltaApprox,  // L1-normalized Gaussian of width eps
  Dirac,        // exact point mass at 0 (quadrature spike when sampled)
  Hermite,      // L2-normalized Hermite function of index k
  File,         // CSV samples, grid-sampling only
  Sum,
  Product,
  Power,  // integer power of a subexpression
};

struct SignalExpr;
using SignalPtr = std::shared_ptr<const SignalExpr>;

struct SignalExpr {
  SignalKind kind;
  Complex cval{0.0, 0.0};  // Const
  double p0 = 0.0, p1 = 0.0;
  int k = 0;         // Hermite index or Power exponent
  std::string path;  // File
  std::vector<SignalPtr> kids;
};

SignalPtr sigConst(Complex v);
SignalPtr sigGauss(double x0, double xi0);
SignalPtr sigChirp(double c);
SignalPtr sigPlanewave(double xi0);
SignalPtr sigDeltaApprox(double eps);
SignalPtr sigDirac();
SignalPtr sigHermite(int k);
SignalPtr sigFile(const std::string& path);
SignalPtr sigSum(std::vector<SignalPtr> kids);
SignalPtr sigProduct(std::vector<SignalPtr> kids);
SignalPtr sigPower(SignalPtr base, int k);

SignalPtr parseSignal(const std::string& text);
std::string prettyPrint(const SignalPtr& e);
bool equal(const SignalPtr& a, const SignalPtr& b);

// L2-normalized Hermite function of index k at y.
double hermiteFunction(int k, double y);

// Pointwise evaluation. Throws for Dirac and File nodes, which only admit
// grid sampling.
Complex evalSignal(const SignalPtr& e, double x);

// True if the expression contains a plane wave or chirp factor; boundary
// decay warnings are suppressed for those.
bool hasNonDecayingFactor(const SignalPtr& e);

struct SampledSignal {
  PhaseGrid grid;
  std::vector<Complex> u;
  bool boundaryWarning = false;
  double boundaryRatio = 0.0;  // boundary max / interior max
};

// Samples the expression on the grid nodes. Dirac becomes the quadrature
// spike 1/hx at x = 0; File nodes are loaded from CSV (one sample per row,
// "re" or "re,im"; row count must equal N).
SampledSignal sampleSignal(const SignalPtr& e, const PhaseGrid& grid);

double l2Norm(const SampledSignal& s);

}  // namespace gmla
