#pragma once

#include <complex>
#include <string>
#include <vector>

#include "gmla/grid.hpp"
#include "gmla/signal_expr.hpp"

namespace gmla {

// Short-time Fourier transform values on the phase lattice
// (x_j, xi_k), row-major with j the spatial index.
struct PhaseField {
  PhaseGrid grid;
  std::vector<Complex> V;
  std::string windowDesc;

  Complex& at(int j, int k) { return V[static_cast<size_t>(j) * grid.nFreq + k]; }
  Complex at(int j, int k) const {
    return V[static_cast<size_t>(j) * grid.nFreq + k];
  }
  double maxAbs() const;
};

struct Window {
  PhaseGrid grid;
  std::vector<double> psi;  // real window samples, discrete L2 norm 1
  std::string desc;
};

// "gaussian" or "hermite(k)"; samples are renormalized so the discrete
// L2 norm is 1 to within 1e-10.
Window makeWindow(const PhaseGrid& grid, const std::string& spec);

// V u(x_j, xi_k) = hx * sum_n u_n conj(psi(y_n - x_j)) exp(-i y_n xi_k),
// window translated with periodic wrap-around.
PhaseField stft(const SampledSignal& u, const Window& w);

// Exact discrete adjoint of stft under the weighted inner products
// (hx for signals, hx*dxi for phase fields).
SampledSignal stftAdjoint(const PhaseField& F, const Window& w);

// || (2 pi)^-1 V* V u - u ||_2 / || u ||_2.
double moyalResidual(const SampledSignal& u, const Window& w);

// True when the expression is a linear combination of closed-form
// primitives (gauss, planewave, chirp, dirac, deltaApprox, hermite).
bool closedFormSupported(const SignalPtr& e);

// Analytic STFT against the standard Gaussian window at an arbitrary
// phase-space point.
Complex closedFormSTFT(const SignalPtr& e, double x, double xi);

// Discrete Fourier transform of the samples, reinterpreted as a signal on
// the same axis. Requires oversample == 1 and a self-dual grid (hx == dxi).
SampledSignal fourierTransform(const SampledSignal& u);

// Self-dual grid (hx == dxi) with the given N; used by the Fourier
// rotation check.
PhaseGrid makeSelfDualGrid(int N);

}  // namespace gmla
