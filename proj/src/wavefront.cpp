#include "gmla/wavefront.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gmla {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double capped(double s, double sCap) {
  return std::isinf(s) ? sCap + 1.0 : std::min(s, sCap + 1.0);
}

bool nonIncreasing(const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1]) return false;
  return true;
}

// Smallest deltaApprox width appearing in the expression (0 if none).
double minDeltaEps(const SignalPtr& e) {
  double eps = 0.0;
  if (e->kind == SignalKind::DeltaApprox) eps = e->p0;
  for (const auto& k : e->kids) {
    double sub = minDeltaEps(k);
    if (sub > 0.0 && (eps == 0.0 || sub < eps)) eps = sub;
  }
  return eps;
}

}  // namespace

GridSampler::GridSampler(PhaseField field) : f_(std::move(field)) {
  max_ = f_.maxAbs();
}

double GridSampler::value(double x, double xi) const {
  const PhaseGrid& g = f_.grid;
  double jf = (x + g.L) / g.hx;
  double kf = xi / g.dxi + g.nFreq / 2;
  if (jf < 0.0 || jf > g.N - 1 || kf < 0.0 || kf > g.nFreq - 1) return 0.0;
  int j0 = std::min(static_cast<int>(jf), g.N - 2);
  int k0 = std::min(static_cast<int>(kf), g.nFreq - 2);
  double tj = jf - j0, tk = kf - k0;
  auto v = [&](int j, int k) { return std::abs(f_.at(j, k)); };
  return (1 - tj) * ((1 - tk) * v(j0, k0) + tk * v(j0, k0 + 1)) +
         tj * ((1 - tk) * v(j0 + 1, k0) + tk * v(j0 + 1, k0 + 1));
}

double GridSampler::reach(double theta) const {
  const PhaseGrid& g = f_.grid;
  double c = std::abs(std::cos(theta)), s = std::abs(std::sin(theta));
  double rx = c < 1e-12 ? kInf : (g.L - g.hx) / c;
  double rxi = s < 1e-12 ? kInf : (g.xiMax() - g.dxi) / s;
  return std::min(rx, rxi);
}

ClosedFormSampler::ClosedFormSampler(SignalPtr e) : e_(std::move(e)) {
  if (!closedFormSupported(e_))
    throw std::invalid_argument(
        "ClosedFormSampler: expression has no analytic transform");
  for (int i = 0; i <= 40; ++i)
    for (int j = 0; j < 72; ++j) {
      double r = 0.25 * i, th = kTwoPi * j / 72;
      max_ = std::max(max_, std::abs(closedFormSTFT(e_, r * std::cos(th),
                                                    r * std::sin(th))));
    }
}

double ClosedFormSampler::value(double x, double xi) const {
  return std::abs(closedFormSTFT(e_, x, xi));
}

WavefrontEstimate estimateWavefront(const FieldSampler& f,
                                    const WfOptions& opt) {
  WavefrontEstimate est;
  est.opts = opt;
  est.dirs.resize(opt.D);
  const double dTheta = kTwoPi / opt.D;
  const double dSub = dTheta / opt.subSteps;
  const double floorAbs = opt.floorRel * f.globalMax();
  const double floorMass = floorAbs * floorAbs * dSub;

  for (int i = 0; i < opt.D; ++i) {
    DirectionEstimate& d = est.dirs[i];
    d.theta = dTheta * i;

    double reach = kInf;
    std::vector<double> coneAngles;
    for (int k = -opt.coneSteps * opt.subSteps;
         k <= opt.coneSteps * opt.subSteps; ++k) {
      double th = d.theta + k * dSub;
      coneAngles.push_back(th);
      reach = std::min(reach, f.reach(th));
    }
    double hi = opt.fitHiFrac * reach;
    if (opt.fitHi > 0.0) hi = std::min(hi, opt.fitHi);
    d.fitLo = opt.fitLo;
    d.fitHi = hi;
    if (!(hi > opt.fitLo * 1.05)) {
      d.inconclusive = true;
      d.sStar = kInf;
      d.gammaG = kInf;
      continue;
    }

    const auto radii = logSpaced(opt.fitLo, hi, opt.nRadii);
    std::vector<double> sup(radii.size(), 0.0), mass(radii.size(), 0.0);
    for (size_t r = 0; r < radii.size(); ++r)
      for (double th : coneAngles) {
        double v = f.value(radii[r] * std::cos(th), radii[r] * std::sin(th));
        sup[r] = std::max(sup[r], v);
        mass[r] += v * v * dSub;
      }

    std::vector<double> logR(radii.size());
    for (size_t r = 0; r < radii.size(); ++r) logR[r] = std::log(radii[r]);

    // Super-polynomial decay over a short fit window can still fit a line
    // with high R^2; it betrays itself by a tail slope much steeper than the
    // head slope. Detect that and treat such directions as fully regular.
    auto accelerating = [&](const std::vector<double>& logY, double cap) {
      size_t h = logR.size() / 2;
      if (h < 3 || logR.size() - h < 3) return false;
      std::vector<double> rH(logR.begin(), logR.begin() + h),
          yH(logY.begin(), logY.begin() + h),
          rT(logR.begin() + h, logR.end()), yT(logY.begin() + h, logY.end());
      double gHead = -fitLine(rH, yH).slope, gTail = -fitLine(rT, yT).slope;
      // The slope-difference gate is invariant under multiplication by a
      // power of r, so order-shifted fields classify the same way.
      if (cap <= 0.0) return gTail - gHead > 3.0;
      return nonIncreasing(yT) && gTail > cap && gTail > 1.5 * gHead + 1.0;
    };
    // Within the fit window the profile may be essentially flat; a fit with
    // near-zero slope has no variance to explain, so R^2 is meaningless and
    // the direction is conclusively irregular.
    auto nearlyFlat = [&](const std::vector<double>& logY, double cap) {
      double gEnd =
          (logY.front() - logY.back()) / (logR.back() - logR.front());
      return std::abs(gEnd) <= 0.5 * cap;
    };

    // Super-polynomial decay reads as the tail dying under the floor.
    if (sup.back() < floorAbs) {
      d.floored = *std::max_element(sup.begin(), sup.end()) < floorAbs;
      d.gammaG = kInf;
      d.r2G = 1.0;
      d.gaborIn = false;
    } else {
      std::vector<double> logV(radii.size());
      for (size_t r = 0; r < radii.size(); ++r)
        logV[r] = std::log(std::max(sup[r], floorAbs));
      LineFit fit = fitLine(logR, logV);
      d.gammaG = -fit.slope;
      d.r2G = fit.r2;
      d.gaborIn = d.gammaG <= opt.Ncap;
      if (accelerating(logV, opt.Ncap)) {
        d.gaborIn = false;
      } else if (fit.r2 < opt.r2Min) {
        // A monotone profile steeper than the cap is still conclusive decay.
        if (nonIncreasing(sup) && d.gammaG > opt.Ncap)
          d.gaborIn = false;
        else if (std::abs(d.gammaG) <= 0.5 * opt.Ncap &&
                 nearlyFlat(logV, opt.Ncap))
          d.gaborIn = true;
        else
          d.inconclusive = true;
      }
    }

    if (mass.back() < floorMass) {
      d.gamma2 = kInf;
      d.r2M = 1.0;
      d.sStar = kInf;
    } else {
      std::vector<double> logM(radii.size());
      for (size_t r = 0; r < radii.size(); ++r)
        logM[r] = std::log(std::max(mass[r], floorMass));
      LineFit fit = fitLine(logR, logM);
      d.gamma2 = -fit.slope;
      d.r2M = fit.r2;
      d.sStar = 0.5 * (d.gamma2 - 2.0);
      if (d.sStar > opt.sCap) d.sStar = kInf;
      const double capM = 4.0;
      if (accelerating(logM, 0.0)) {
        // Decay steepens markedly across the window: super-polynomial, so
        // the threshold lies beyond what this window can measure. The
        // direction is regular but carries no comparable finite value.
        d.sStar = kInf;
        d.inconclusive = true;
      } else if (fit.r2 < opt.r2Min) {
        if (nonIncreasing(mass) && !(d.sStar <= opt.sCap))
          d.sStar = kInf;
        else if (std::abs(d.gamma2) <= 0.5 * capM && nearlyFlat(logM, capM))
          ;  // keep the fitted threshold: flat profiles are conclusive
        else
          d.inconclusive = true;
      }
    }
  }
  return est;
}

std::vector<char> WavefrontEstimate::gaborSet() const {
  std::vector<char> v(dirs.size());
  for (size_t i = 0; i < dirs.size(); ++i) v[i] = dirs[i].gaborIn;
  return v;
}

std::vector<char> WavefrontEstimate::sobolevSet(double s) const {
  std::vector<char> v(dirs.size());
  for (size_t i = 0; i < dirs.size(); ++i)
    v[i] = !(s < dirs[i].sStar - opts.margin);
  return v;
}

std::vector<char> WavefrontEstimate::finiteThresholdSet() const {
  std::vector<char> v(dirs.size());
  for (size_t i = 0; i < dirs.size(); ++i)
    v[i] = std::isfinite(dirs[i].sStar) && dirs[i].sStar <= opts.sCap;
  return v;
}

int WavefrontEstimate::inconclusiveCount() const {
  int n = 0;
  for (const auto& d : dirs) n += d.inconclusive ? 1 : 0;
  return n;
}

WavefrontEstimate gaborWF(const SampledSignal& u, const Window& w,
                          const WfOptions& opt) {
  return estimateWavefront(GridSampler(stft(u, w)), opt);
}

WavefrontEstimate closedFormWF(const SignalPtr& e, WfOptions opt) {
  WfOptions defaults;
  if (opt.fitHi == 0.0) opt.fitHi = 2000.0;
  if (opt.fitLo == defaults.fitLo) opt.fitLo = 20.0;
  double eps = minDeltaEps(e);
  if (eps > 0.0) opt.fitHi = std::min(opt.fitHi, 0.5 / eps);
  return estimateWavefront(ClosedFormSampler(e), opt);
}

bool directionSetsAgree(const std::vector<char>& a, const std::vector<char>& b,
                        int tolSteps) {
  if (a.size() != b.size()) return false;
  int n = static_cast<int>(a.size());
  auto covered = [&](const std::vector<char>& in, const std::vector<char>& by,
                     int i) {
    for (int k = -tolSteps; k <= tolSteps; ++k)
      if (by[((i + k) % n + n) % n]) return true;
    (void)in;
    return false;
  };
  for (int i = 0; i < n; ++i) {
    if (a[i] && !covered(a, b, i)) return false;
    if (b[i] && !covered(b, a, i)) return false;
  }
  return true;
}

InclusionReport inclusionCheck(const WavefrontEstimate& before,
                               const WavefrontEstimate& after,
                               double orderShift, InclusionMode mode,
                               const std::vector<char>* excludeChar,
                               double tol) {
  if (before.dirs.size() != after.dirs.size())
    throw std::invalid_argument("inclusionCheck: direction counts differ");
  InclusionReport rep;
  rep.mode = mode;
  rep.orderShift = orderShift;
  rep.tol = tol;
  const double sCap = before.opts.sCap;
  for (size_t i = 0; i < before.dirs.size(); ++i) {
    const auto& db = before.dirs[i];
    const auto& da = after.dirs[i];
    if (db.inconclusive || da.inconclusive) {
      ++rep.skippedInconclusive;
      continue;
    }
    if (excludeChar && (*excludeChar)[i]) {
      ++rep.skippedChar;
      continue;
    }
    double sb = capped(db.sStar, sCap), sa = capped(da.sStar, sCap);
    double excess = 0.0;
    if (mode == InclusionMode::Microlocal) {
      // The operator may not create singularities: after >= before - shift.
      excess = (sb - orderShift) - sa - tol;
    } else {
      // Off the char set the operator may not remove them either. A fully
      // regular input direction imposes no lower bound on the output.
      if (std::isinf(db.sStar)) continue;
      excess = (sa + orderShift) - sb - tol;
    }
    if (excess > 0.0)
      rep.violations.push_back({db.theta, db.sStar, da.sStar, excess});
  }
  return rep;
}

ConeFilter buildConeFilter(const Cone& gamma1, const Cone& gamma2, double m,
                           double wRadial) {
  const int n = 3600;
  bool hasIn1Only = false, hasIn2Only = false;
  for (int i = 0; i < n; ++i) {
    double th = kTwoPi * i / n;
    bool in1 = gamma1.containsAngle(th), in2 = gamma2.containsAngle(th);
    if (!in1 && !in2)
      throw std::invalid_argument(
          "buildConeFilter: the two cones must cover all directions");
    if (in1 && !in2) hasIn1Only = true;
    if (in2 && !in1) hasIn2Only = true;
  }
  if (!hasIn1Only || !hasIn2Only)
    throw std::invalid_argument(
        "buildConeFilter: both set differences need nonempty interior");

  ConeFilter f;
  f.gamma1 = gamma1;
  f.gamma2 = gamma2;
  f.m = m;

  double h1 = gamma1.halfWidth();
  double lambda1 = 6.2 / (1.0 - std::cos(h1));
  f.chi1 = coneSigmoidSymbol(gamma1, wRadial, lambda1);

  // Angular factor of chi2: close to 1 on gamma2 \ gamma1, dips (but stays
  // bounded below) over the interior of gamma1 \ gamma2.
  double lo = Cone::wrapAngle(gamma2.thetaHi);  // start of gamma1 \ gamma2
  double hiA = gamma2.thetaLo;                  // end of it
  if (hiA <= lo) hiA += kTwoPi;
  double hInner = 0.857 * 0.5 * (hiA - lo);
  double cInner = 0.5 * (lo + hiA);
  double lambdaInner = 6.2 / (1.0 - std::cos(hInner));
  SymPtr sigmaInner = coneSigmoidSymbol(
      Cone::make(cInner - hInner, cInner + hInner, gamma1.R), wRadial,
      lambdaInner);
  SymPtr g = symSum({symConst(1.0), symProduct({symConst(-0.95), sigmaInner})});
  f.chi2 = symProduct({symBracket(-m), g});
  f.total = symSum({f.chi1, f.chi2});
  f.charCheck = estimateCharSet(f.total, -m);
  f.valid = f.charCheck.empty();
  return f;
}

FilterReport filterOrderReport(const WavefrontEstimate& before,
                               const WavefrontEstimate& after, double m,
                               const Cone& gamma1, const Cone& gamma2,
                               double tol) {
  if (before.dirs.size() != after.dirs.size())
    throw std::invalid_argument("filterOrderReport: direction counts differ");
  FilterReport rep;
  rep.m = m;
  rep.tol = tol;
  rep.preserved.region = "gamma1 \\ gamma2";
  rep.raised.region = "gamma2 \\ gamma1";
  const double sCap = before.opts.sCap;
  for (size_t i = 0; i < before.dirs.size(); ++i) {
    const auto& db = before.dirs[i];
    const auto& da = after.dirs[i];
    if (db.inconclusive || da.inconclusive) continue;
    if (!(std::isfinite(db.sStar) && db.sStar <= sCap)) continue;  // regular
    double th = db.theta;
    bool in1 = gamma1.containsAngle(th), in2 = gamma2.containsAngle(th);
    double sb = capped(db.sStar, sCap), sa = capped(da.sStar, sCap);
    if (in1 && !in2) {
      rep.preserved.skipped = false;
      ++rep.preserved.checkedCount;
      double excess = std::abs(sa - sb) - tol;
      if (excess > 0.0)
        rep.preserved.violations.push_back({th, db.sStar, da.sStar, excess});
    } else if (in2 && !in1) {
      rep.raised.skipped = false;
      ++rep.raised.checkedCount;
      double excess = std::abs(sa - (sb + m)) - tol;
      if (excess > 0.0)
        rep.raised.violations.push_back({th, db.sStar, da.sStar, excess});
    }
  }
  return rep;
}

}  // namespace gmla
