#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace gmla {

// Ordinary least squares line fit y = a + b*x with coefficient of
// determination. Used for log-log decay exponent estimation.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
  int n = 0;
};

inline LineFit fitLine(const std::vector<double>& x,
                       const std::vector<double>& y) {
  LineFit f;
  f.n = static_cast<int>(x.size());
  if (f.n < 2) return f;
  double sx = 0, sy = 0;
  for (int i = 0; i < f.n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  double mx = sx / f.n, my = sy / f.n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < f.n; ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (syy <= 0.0) {
    f.r2 = 1.0;  // constant data, perfectly explained by slope 0
  } else {
    double ssres = syy - f.slope * sxy;
    f.r2 = 1.0 - ssres / syy;
  }
  return f;
}

// Log-spaced sample points in [lo, hi].
inline std::vector<double> logSpaced(double lo, double hi, int n) {
  std::vector<double> r(n);
  double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    r[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
  return r;
}

}  // namespace gmla
