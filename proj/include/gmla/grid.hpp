#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace gmla {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline bool isPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Uniform discretization of configuration space [-L, L) together with the
// DFT-dual frequency axis. The frequency axis may be densified by an integer
// oversampling factor; spacing is then 2*pi / (N * oversample * hx).
struct PhaseGrid {
  int d = 1;          // space dimension (numeric paths support d == 1)
  double L = 16.0;    // half side length
  int N = 256;        // samples per axis (power of two)
  int oversample = 1; // frequency axis densification factor
  double hx = 0.0;    // spatial step 2L/N
  double dxi = 0.0;   // frequency step
  int nFreq = 0;      // number of frequency samples N * oversample

  static PhaseGrid make(int d, double L, int N, int oversample = 1) {
    if (d != 1)
      throw std::invalid_argument("PhaseGrid: numeric paths require d == 1");
    if (L <= 0.0)
      throw std::invalid_argument("PhaseGrid: L must be positive");
    if (!isPowerOfTwo(N) || N < 16)
      throw std::invalid_argument(
          "PhaseGrid: N must be a power of two with N >= 16, got " +
          std::to_string(N));
    if (oversample < 1)
      throw std::invalid_argument("PhaseGrid: oversample must be >= 1");
    PhaseGrid g;
    g.d = d;
    g.L = L;
    g.N = N;
    g.oversample = oversample;
    g.hx = 2.0 * L / N;
    g.nFreq = N * oversample;
    g.dxi = kTwoPi / (g.nFreq * g.hx);
    return g;
  }

  double x(int j) const { return -L + j * hx; }
  double xi(int k) const { return (k - nFreq / 2) * dxi; }
  double xiMax() const { return kPi / hx; }

  // Index of the spatial node closest to zero (x == 0 exactly).
  int originIndex() const { return N / 2; }

  bool sameSignalAxis(const PhaseGrid& o) const {
    return d == o.d && N == o.N && L == o.L;
  }
  bool samePhaseLattice(const PhaseGrid& o) const {
    return sameSignalAxis(o) && oversample == o.oversample;
  }
};

// Open conic region in d=1 phase space: directions with angle in
// (thetaLo, thetaHi) (mod 2*pi) and radius > R. Width must be < 2*pi.
struct Cone {
  double thetaLo = 0.0;  // normalized to [0, 2*pi)
  double thetaHi = 0.0;  // in (thetaLo, thetaLo + 2*pi)
  double R = 0.0;        // inner radius

  static double wrapAngle(double t) {
    double w = std::fmod(t, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w;
  }

  static Cone make(double lo, double hi, double R) {
    if (!(hi > lo))
      throw std::invalid_argument("Cone: need thetaHi > thetaLo");
    if (hi - lo >= kTwoPi)
      throw std::invalid_argument("Cone: angular width must be < 2*pi");
    if (R < 0.0) throw std::invalid_argument("Cone: R must be >= 0");
    Cone c;
    c.thetaLo = wrapAngle(lo);
    c.thetaHi = c.thetaLo + (hi - lo);
    c.R = R;
    return c;
  }

  double width() const { return thetaHi - thetaLo; }
  double center() const { return wrapAngle(0.5 * (thetaLo + thetaHi)); }
  double halfWidth() const { return 0.5 * width(); }

  bool containsAngle(double theta) const {
    double t = wrapAngle(theta);
    if (t < thetaLo) t += kTwoPi;
    return t > thetaLo && t < thetaHi;
  }

  bool contains(double x, double xi) const {
    double r = std::hypot(x, xi);
    if (r <= R) return false;
    return containsAngle(std::atan2(xi, x));
  }
};

}  // namespace gmla
