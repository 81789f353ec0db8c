#include "gmla/symbol_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gmla {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double bracketWeight(double x, double xi) {
  return std::sqrt(1.0 + x * x + xi * xi);
}

// All multi-indices with ax + axi <= K, lexicographic by total order.
std::vector<std::pair<int, int>> multiIndices(int K) {
  std::vector<std::pair<int, int>> v;
  for (int t = 0; t <= K; ++t)
    for (int ax = t; ax >= 0; --ax) v.emplace_back(ax, t - ax);
  return v;
}

}  // namespace

SeminormTable seminormScreen(const SymPtr& a, double m, double rMin,
                             double rMax, int K) {
  if (!(rMin > 0.0) || !(rMax > rMin))
    throw std::invalid_argument("seminormScreen: need 0 < rMin < rMax");
  SeminormTable t;
  t.m = m;
  t.rMin = rMin;
  t.rMax = rMax;
  t.K = K;

  const int nDir = 72;
  const auto radii = logSpaced(rMin, 1.2 * rMax, 20);
  const auto alphas = multiIndices(K);
  t.entries.reserve(alphas.size());
  bool allFinite = true;
  double maxGrowth = 0.0;
  for (auto [ax, axi] : alphas) {
    SeminormEntry e;
    e.ax = ax;
    e.axi = axi;
    for (double r : radii) {
      for (int j = 0; j < nDir; ++j) {
        double th = kTwoPi * j / nDir;
        double x = r * std::cos(th), xi = r * std::sin(th);
        double v = std::abs(evalSymbolDeriv(a, ax, axi, x, xi)) *
                   std::pow(bracketWeight(x, xi), ax + axi - m);
        e.extended = std::max(e.extended, v);
        if (r <= rMax) e.constant = std::max(e.constant, v);
      }
    }
    if (!std::isfinite(e.extended)) allFinite = false;
    double growth = 0.0;
    if (e.constant > 0.0)
      growth = (e.extended - e.constant) / e.constant;
    else if (e.extended > 0.0)
      growth = kInf;
    maxGrowth = std::max(maxGrowth, growth);
    t.entries.push_back(e);
  }
  t.maxGrowth = maxGrowth;
  t.pass = allFinite && maxGrowth < 0.10;
  return t;
}

SymPtr weylProductTruncated(const SymPtr& a, const SymPtr& b, int nLevels) {
  if (nLevels < 1)
    throw std::invalid_argument("weylProductTruncated: need nLevels >= 1");
  const Complex mi(0.0, -1.0);  // -i, one factor per derivative
  std::vector<SymPtr> terms;
  for (int n = 0; n < nLevels; ++n)
    for (int alpha = 0; alpha <= n; ++alpha) {
      int beta = n - alpha;
      Complex c = std::pow(mi, n) * ((beta % 2) ? -1.0 : 1.0) /
                  (Jet2::factorial(alpha) * Jet2::factorial(beta) *
                   std::pow(2.0, n));
      terms.push_back(symProduct({symConst(c), derivativeAlpha(a, beta, alpha),
                                  derivativeAlpha(b, alpha, beta)}));
    }
  return symSum(std::move(terms));
}

double WickCoefficients::at(int ax, int axi) const {
  auto it = c.find({ax, axi});
  return it == c.end() ? 0.0 : it->second;
}

WickCoefficients wickCoefficients(int K) {
  if (K < 0) throw std::invalid_argument("wickCoefficients: K >= 0");
  // Normalized one-dimensional Gaussian moments by symmetric trapezoid
  // quadrature on [-8, 8]; odd moments vanish by the symmetric node pairing.
  const int M = 1024;
  const double h = 8.0 / M;
  std::vector<double> mom(K + 1, 0.0);
  double mass = 1.0;  // the w = 0 node (trapezoid endpoints are negligible)
  for (int i = 1; i <= M; ++i) {
    double w = i * h;
    double g = std::exp(-w * w);
    mass += 2.0 * g;
    double p = 1.0;
    for (int n = 1; n <= K; ++n) {
      p *= w;
      if (n % 2 == 0) mom[n] += 2.0 * p * g;
    }
  }
  for (int n = 1; n <= K; ++n) mom[n] /= mass;
  mom[0] = 1.0;

  WickCoefficients wc;
  wc.K = K;
  for (auto [ax, axi] : multiIndices(K)) {
    if (ax % 2 || axi % 2) continue;  // odd moments vanish
    wc.c[{ax, axi}] =
        mom[ax] * mom[axi] / (Jet2::factorial(ax) * Jet2::factorial(axi));
  }
  return wc;
}

SymPtr wickSmoothPolynomial(const SymPtr& a) {
  if (!isPolynomial(a))
    throw std::invalid_argument(
        "wickSmoothPolynomial: symbol is not polynomial");
  int deg = polyDegree(a);
  WickCoefficients wc = wickCoefficients(deg);
  std::vector<SymPtr> terms;
  for (const auto& [alpha, c] : wc.c) {
    if (c == 0.0) continue;
    terms.push_back(symProduct(
        {symConst(c), derivativeAlpha(a, alpha.first, alpha.second)}));
  }
  return symSum(std::move(terms));
}

Complex wickSmoothSample(const SymPtr& a, double x, double xi) {
  // b(z) = pi^-1 int exp(-|w|^2) a(z - w) dw, kernel truncated at |w_i| <= 6.
  const int M = 60;
  const double h = 6.0 / M;
  Complex acc{0.0, 0.0};
  double mass = 0.0;
  for (int i = -M; i <= M; ++i) {
    double wx = i * h;
    double gx = std::exp(-wx * wx);
    for (int j = -M; j <= M; ++j) {
      double wxi = j * h;
      double g = gx * std::exp(-wxi * wxi);
      acc += g * evalSymbol(a, x - wx, xi - wxi);
      mass += g;
    }
  }
  return acc / mass;  // self-normalized: exact unit kernel mass
}

bool CharSetEstimate::empty() const {
  for (char f : nonHyperchar)
    if (!f) return false;
  return true;
}

std::vector<double> CharSetEstimate::hypercharDirections() const {
  std::vector<double> v;
  for (size_t i = 0; i < theta.size(); ++i)
    if (!nonHyperchar[i]) v.push_back(theta[i]);
  return v;
}

CharSetEstimate estimateCharSet(const SymPtr& a, double mPrime,
                                const CharSetOptions& opt) {
  CharSetEstimate est;
  est.mPrime = mPrime;
  est.tauLow = opt.tauLow;
  est.tauRatio = opt.tauRatio;
  const auto radii = logSpaced(opt.rMin, opt.rMax, opt.nRadii);
  const auto alphas = multiIndices(opt.K);

  // Per-direction ray statistics, then combined over angular neighbors.
  std::vector<double> rayLow(opt.D, kInf), rayRatio(opt.D, 0.0);
  for (int j = 0; j < opt.D; ++j) {
    double th = kTwoPi * j / opt.D;
    for (double r : radii) {
      double x = r * std::cos(th), xi = r * std::sin(th);
      double w = bracketWeight(x, xi);
      double av = std::abs(evalSymbol(a, x, xi));
      rayLow[j] = std::min(rayLow[j], av * std::pow(w, -mPrime));
      if (av < 1e-300) {
        rayRatio[j] = kInf;
        continue;
      }
      for (auto [ax, axi] : alphas) {
        if (ax == 0 && axi == 0) continue;
        double dv = std::abs(evalSymbolDeriv(a, ax, axi, x, xi));
        rayRatio[j] =
            std::max(rayRatio[j], dv * std::pow(w, ax + axi) / av);
      }
    }
  }

  est.theta.resize(opt.D);
  est.cLow.resize(opt.D);
  est.ratio.resize(opt.D);
  est.nonHyperchar.resize(opt.D);
  for (int j = 0; j < opt.D; ++j) {
    est.theta[j] = kTwoPi * j / opt.D;
    int jm = (j + opt.D - 1) % opt.D, jp = (j + 1) % opt.D;
    est.cLow[j] = std::min({rayLow[jm], rayLow[j], rayLow[jp]});
    est.ratio[j] = std::max({rayRatio[jm], rayRatio[j], rayRatio[jp]});
    est.nonHyperchar[j] =
        est.cLow[j] >= opt.tauLow && est.ratio[j] <= opt.tauRatio;
  }
  return est;
}

MicrosupportEstimate estimateMicrosupport(const SymPtr& a,
                                          const MicrosupportOptions& opt) {
  MicrosupportEstimate est;
  est.theta.resize(opt.D);
  est.exponent.resize(opt.D);
  est.r2.resize(opt.D);
  est.inSupport.resize(opt.D);
  est.inconclusive.assign(opt.D, 0);
  const auto radii = logSpaced(opt.rMin, opt.rMax, opt.nRadii);
  const auto alphas = multiIndices(opt.K);

  for (int j = 0; j < opt.D; ++j) {
    double th = kTwoPi * j / opt.D;
    est.theta[j] = th;
    std::vector<double> logR, logV;
    double vmax = 0.0;
    std::vector<double> vals;
    for (double r : radii) {
      double x = r * std::cos(th), xi = r * std::sin(th);
      double v = 0.0;
      for (auto [ax, axi] : alphas)
        v = std::max(v, std::abs(evalSymbolDeriv(a, ax, axi, x, xi)));
      vals.push_back(v);
      vmax = std::max(vmax, v);
    }
    if (vmax < opt.floorAbs || vals.back() < opt.floorAbs) {
      // The ray family dies out: super-polynomial decay (or zero support).
      est.exponent[j] = kInf;
      est.r2[j] = 1.0;
      est.inSupport[j] = 0;
      continue;
    }
    for (size_t i = 0; i < radii.size(); ++i) {
      logR.push_back(std::log(radii[i]));
      logV.push_back(std::log(std::max(vals[i], opt.floorAbs)));
    }
    LineFit f = fitLine(logR, logV);
    est.exponent[j] = -f.slope;
    est.r2[j] = f.r2;
    if (f.r2 >= opt.r2Min) {
      est.inSupport[j] = est.exponent[j] <= opt.Nmax;
    } else {
      bool decreasing = true;
      for (size_t i = 1; i < vals.size(); ++i)
        if (vals[i] > vals[i - 1]) decreasing = false;
      if (decreasing && est.exponent[j] > opt.Nmax) {
        // Monotone decay at least as fast as the average slope.
        est.inSupport[j] = 0;
      } else {
        est.inSupport[j] = 1;
        est.inconclusive[j] = 1;
      }
    }
  }
  return est;
}

ParametrixResult parametrixTruncated(const SymPtr& a, const SymPtr& chi,
                                     double mPrime, int nTerms,
                                     const Cone& cone,
                                     const ParametrixOptions& opt) {
  if (nTerms < 1)
    throw std::invalid_argument("parametrixTruncated: need nTerms >= 1");
  int nLevels = opt.nLevels > 0 ? opt.nLevels : 2 * nTerms + 2;

  // Plateau directions around the cone center.
  std::vector<double> dirs;
  for (int i = 0; i < opt.nDirections; ++i) {
    double f = opt.nDirections == 1
                   ? 0.0
                   : -0.3 + 0.6 * i / (opt.nDirections - 1);
    dirs.push_back(cone.center() + f * cone.halfWidth());
  }
  const auto radii = logSpaced(opt.rMin, opt.rMax, opt.nRadii);

  // Precondition: the symbol must stay elliptic of order mPrime on the cone.
  for (double th : dirs)
    for (double r : radii) {
      double x = r * std::cos(th), xi = r * std::sin(th);
      double bound = std::abs(evalSymbol(a, x, xi)) *
                     std::pow(bracketWeight(x, xi), -mPrime);
      if (!(bound >= opt.tauLow))
        throw std::domain_error(
            "parametrixTruncated: symbol is not elliptic of the requested "
            "order on the cone");
    }

  SymPtr aInv = symPower(a, -1);
  SymPtr bSum = symProduct({chi, aInv});
  SymPtr rem = symSum({weylProductTruncated(bSum, a, nLevels),
                       symProduct({symConst(-1.0), chi})});
  for (int j = 1; j < nTerms; ++j) {
    SymPtr bj = symProduct({symConst(-1.0), rem, aInv});
    bSum = symSum({bSum, bj});
    rem = symSum({weylProductTruncated(bSum, a, nLevels),
                  symProduct({symConst(-1.0), chi})});
  }

  ParametrixResult res;
  res.b = bSum;
  res.remainder = rem;
  std::vector<double> logR, logV;
  bool anyAbove = false;
  for (double r : radii) {
    double v = 0.0;
    for (double th : dirs)
      v = std::max(v,
                   std::abs(evalSymbol(rem, r * std::cos(th),
                                       r * std::sin(th))));
    if (v > opt.floorAbs) anyAbove = true;
    logR.push_back(std::log(r));
    logV.push_back(std::log(std::max(v, opt.floorAbs)));
  }
  if (!anyAbove) {
    res.belowFloor = true;
    res.exponent = kInf;
    res.r2 = 1.0;
    return res;
  }
  LineFit f = fitLine(logR, logV);
  res.exponent = -f.slope;
  res.r2 = f.r2;
  return res;
}

}  // namespace gmla
