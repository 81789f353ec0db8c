#pragma once

#include <Eigen/Dense>
#include <string>

#include "gmla/stft.hpp"
#include "gmla/symbol_expr.hpp"

namespace gmla {

// Dense matrix acting directly on sample vectors (quadrature weight hx is
// folded into the entries).
struct OperatorRep {
  PhaseGrid grid;
  Eigen::MatrixXcd mat;
  std::string symbolText;
  std::string quantization;  // "weyl" or "antiwick"
  double order = 0.0;
};

// Weyl quantization via the midpoint kernel
//   K(x, y) = (2 pi)^-1 int exp(i (x - y) xi) a((x + y) / 2, xi) d xi,
// with the xi integral evaluated exactly on the grid's DFT frequencies
// (one inverse FFT per anti-diagonal). a = 1 gives the exact identity and
// a = x the exact diagonal multiplication.
OperatorRep weylQuantize(const SymPtr& a, const PhaseGrid& grid);

SampledSignal applyOperator(const OperatorRep& op, const SampledSignal& u);

// Localization operator A_a u = (2 pi)^-1 V* (a . V u) with the standard
// Gaussian window.
SampledSignal antiWickApply(const SymPtr& a, const SampledSignal& u);

// Largest singular value estimate by power iteration on op^H op
// (fixed seed, fixed iteration count: deterministic).
double operatorNormEstimate(const Eigen::MatrixXcd& m, int iters = 200);

enum class QNormMethod { StftWeighted, LocOp, WeylElliptic };
QNormMethod parseQNormMethod(const std::string& name);
std::string qNormMethodName(QNormMethod m);

struct QNormReport {
  double s = 0.0;
  double value = 0.0;
  QNormMethod method = QNormMethod::StftWeighted;
  std::string windowDesc;
};

// Weighted-space norm of order s by one of the three equivalent recipes:
//  - StftWeighted: || <z>^s V u ||_2 over the phase lattice,
//  - LocOp:        || A_{<.>^s} u ||_2,
//  - WeylElliptic: || (<.>^s)^w u ||_2.
QNormReport qNorm(const SampledSignal& u, double s, QNormMethod method,
                  const Window& w);

struct QBoundednessReport {
  double s = 0.0, m = 0.0;
  double ratio = 0.0;         // sup over the test set at grid N
  double ratioRefined = 0.0;  // same at grid 2N
  double change = 0.0;        // relative change under refinement
  bool pass = false;          // finite and stable (< 20% change)
};

// Sup over the test set of qNorm(a^w u, s - m) / qNorm(u, s), checked for
// stability under doubling N.
QBoundednessReport qBoundednessCheck(const SymPtr& a, double m, double s,
                                     const std::vector<SignalPtr>& testSet,
                                     const PhaseGrid& grid);

}  // namespace gmla
