#pragma once

#include <map>
#include <string>
#include <vector>

#include "gmla/fit.hpp"
#include "gmla/grid.hpp"
#include "gmla/symbol_expr.hpp"

namespace gmla {

// Sup of <z>^(|alpha| - m) |d^alpha a| over a sampled annulus, one entry per
// derivative multi-index up to total order K.
struct SeminormEntry {
  int ax = 0, axi = 0;
  double constant = 0.0;  // annulus sup
  double extended = 0.0;  // same sup on the 20% larger annulus
};

struct SeminormTable {
  double m = 0.0;
  double rMin = 0.0, rMax = 0.0;
  int K = 0;
  std::vector<SeminormEntry> entries;
  bool pass = false;       // all finite and stable under annulus extension
  double maxGrowth = 0.0;  // worst relative growth under extension
};

// Screens a declared order m over the annulus [rMin, rMax]; PASS requires all
// constants finite and growing by less than 10% when the outer radius is
// extended by 20% (shrinking constants are always acceptable).
SeminormTable seminormScreen(const SymPtr& a, double m, double rMin,
                             double rMax, int K);

// Truncated Weyl product: sum over levels |alpha| + |beta| < nLevels of
//   (-1)^beta (-i)^(alpha+beta) / (alpha! beta! 2^(alpha+beta))
//     * (d_x^beta d_xi^alpha a) (d_x^alpha d_xi^beta b)
// as a symbol AST. Level 0 is the pointwise product.
SymPtr weylProductTruncated(const SymPtr& a, const SymPtr& b, int nLevels);

// Coefficients of the Gaussian-smoothing expansion b ~ sum c_alpha d^alpha a:
// c_alpha = (1/alpha!) pi^(-1) int (-w)^alpha exp(-|w|^2) dw, separable per
// coordinate. Exactly 1 at alpha = 0 and exactly 0 for odd coordinates.
struct WickCoefficients {
  int K = 0;
  std::map<std::pair<int, int>, double> c;
  double at(int ax, int axi) const;
};
WickCoefficients wickCoefficients(int K);

// Gaussian smoothing b = pi^(-1) exp(-|.|^2) * a.
// Polynomial path: exact finite expansion sum c_alpha d^alpha a as an AST.
SymPtr wickSmoothPolynomial(const SymPtr& a);
// Sampled path: trapezoid quadrature over the truncated kernel |w_i| <= 6.
Complex wickSmoothSample(const SymPtr& a, double x, double xi);

// Per-direction lower-bound / derivative-ratio screen at order mPrime.
struct CharSetEstimate {
  double mPrime = 0.0;
  double tauLow = 1e-3, tauRatio = 1e3;
  std::vector<double> theta;
  std::vector<double> cLow;   // inf over rays of |a| <z>^(-mPrime)
  std::vector<double> ratio;  // sup over rays of |d^alpha a| <z>^|alpha| / |a|
  std::vector<char> nonHyperchar;

  // True when every sampled direction passes (empty hypercharacteristic set).
  bool empty() const;
  // Directions failing the screen.
  std::vector<double> hypercharDirections() const;
};

struct CharSetOptions {
  int D = 360;
  double rMin = 5.0, rMax = 50.0;
  int nRadii = 16;
  int K = 3;  // derivative ratio order
  double tauLow = 1e-3, tauRatio = 1e3;
};

CharSetEstimate estimateCharSet(const SymPtr& a, double mPrime,
                                const CharSetOptions& opt = {});

// Per-direction radial decay fit of max_{|alpha| <= K} |d^alpha a|.
struct MicrosupportEstimate {
  std::vector<double> theta;
  std::vector<double> exponent;  // fitted decay exponent (+inf below floor)
  std::vector<double> r2;
  std::vector<char> inSupport;     // not excluded by the decay test
  std::vector<char> inconclusive;  // poor fit, never silently classified
};

struct MicrosupportOptions {
  int D = 360;
  double rMin = 5.0, rMax = 50.0;
  int nRadii = 16;
  int K = 2;
  double Nmax = 8.0;
  double r2Min = 0.9;
  double floorAbs = 1e-280;
};

MicrosupportEstimate estimateMicrosupport(const SymPtr& a,
                                          const MicrosupportOptions& opt = {});

// Truncated parametrix for a over the plateau of the cutoff chi:
// b0 = chi / a, b_{j+1} = -r_j / a with r_j the remainder of the truncated
// Weyl product, b = sum_{j < nTerms} b_j. Reports the fitted radial decay
// exponent of |b # a - chi| along plateau directions of the cone.
struct ParametrixResult {
  SymPtr b;
  SymPtr remainder;       // truncated b # a - chi as an AST
  double exponent = 0.0;  // fitted decay exponent of |remainder|
  double r2 = 0.0;
  bool belowFloor = false;  // remainder at rounding level everywhere
};

struct ParametrixOptions {
  int nLevels = 0;  // Weyl product truncation; 0 = 2*nTerms + 2
  double rMin = 5.0, rMax = 50.0;
  int nRadii = 16;
  int nDirections = 7;  // plateau directions sampled around the cone center
  double floorAbs = 1e-13;
  double tauLow = 1e-3;  // ellipticity bound required along the cone
};

ParametrixResult parametrixTruncated(const SymPtr& a, const SymPtr& chi,
                                     double mPrime, int nTerms,
                                     const Cone& cone,
                                     const ParametrixOptions& opt = {});

}  // namespace gmla
