#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gmla/stft.hpp"
#include "gmla/symbol_calculus.hpp"
#include "gmla/symbol_expr.hpp"

namespace gmla {

// Source of |V u| values at arbitrary phase-space points.
class FieldSampler {
 public:
  virtual ~FieldSampler() = default;
  virtual double value(double x, double xi) const = 0;
  // Largest radius along the direction where values are reliable.
  virtual double reach(double theta) const = 0;
  virtual double globalMax() const = 0;
};

// Bilinear interpolation of |V| on a computed phase field; zero outside.
class GridSampler : public FieldSampler {
 public:
  explicit GridSampler(PhaseField field);
  double value(double x, double xi) const override;
  double reach(double theta) const override;
  double globalMax() const override { return max_; }

 private:
  PhaseField f_;
  double max_ = 0.0;
};

// Analytic STFT magnitudes; unlimited reach.
class ClosedFormSampler : public FieldSampler {
 public:
  explicit ClosedFormSampler(SignalPtr e);
  double value(double x, double xi) const override;
  double reach(double) const override { return 1e9; }
  double globalMax() const override { return max_; }

 private:
  SignalPtr e_;
  double max_ = 0.0;
};

struct WfOptions {
  int D = 360;        // sampled directions
  int coneSteps = 3;  // cone half-width in angular steps
  int subSteps = 4;   // angular sub-samples per step inside the cone
  double fitLo = 4.0;
  double fitHi = 0.0;  // explicit cap on the fit window (0 = reach-based)
  double fitHiFrac = 0.7;
  int nRadii = 24;
  double Ncap = 8.0;  // decay exponents beyond this read as super-polynomial
  double sCap = 8.0;
  double margin = 0.25;  // threshold comparison band
  double r2Min = 0.9;
  double floorRel = 1e-13;  // dynamic-range floor relative to the field max
};

struct DirectionEstimate {
  double theta = 0.0;
  double gammaG = 0.0, r2G = 0.0;  // cone-shell sup decay exponent
  double gamma2 = 0.0, r2M = 0.0;  // cone-shell mass decay exponent
  double sStar = 0.0;              // (gamma2 - 2) / 2, +inf if super-poly
  bool gaborIn = true;
  bool inconclusive = false;
  bool floored = false;  // everything under the dynamic-range floor
  double fitLo = 0.0, fitHi = 0.0;
};

struct WavefrontEstimate {
  WfOptions opts;
  std::vector<DirectionEstimate> dirs;

  std::vector<char> gaborSet() const;
  // Membership in the order-s singular set: IN iff s >= sStar - margin.
  std::vector<char> sobolevSet(double s) const;
  // Directions with a finite (below-cap) threshold.
  std::vector<char> finiteThresholdSet() const;
  int inconclusiveCount() const;
};

WavefrontEstimate estimateWavefront(const FieldSampler& f,
                                    const WfOptions& opt);

// Grid pipeline: STFT of the samples, then cone-resolved decay fits.
WavefrontEstimate gaborWF(const SampledSignal& u, const Window& w,
                          const WfOptions& opt);
// Analytic pipeline for closed-form signals (Gaussian window only). The fit
// window defaults to [20, 2000] and is capped at 0.5/eps for deltaApprox.
WavefrontEstimate closedFormWF(const SignalPtr& e, WfOptions opt);

// Symmetric comparison up to a circular dilation by tolSteps.
bool directionSetsAgree(const std::vector<char>& a, const std::vector<char>& b,
                        int tolSteps);

enum class InclusionMode { Microlocal, Microelliptic };

struct DirectionViolation {
  double theta = 0.0;
  double before = 0.0, after = 0.0;  // thresholds (capped values)
  double excess = 0.0;
};

struct InclusionReport {
  InclusionMode mode = InclusionMode::Microlocal;
  double orderShift = 0.0;
  double tol = 0.3;
  std::vector<DirectionViolation> violations;
  int skippedInconclusive = 0;
  int skippedChar = 0;
  bool pass() const { return violations.empty(); }
};

// Compares thresholds of u (before) and of the operator output (after).
// Microlocal: after >= before - orderShift - tol at every conclusive theta.
// Microelliptic: before >= after + orderShift - tol outside the given
// hypercharacteristic direction set.
InclusionReport inclusionCheck(const WavefrontEstimate& before,
                               const WavefrontEstimate& after,
                               double orderShift, InclusionMode mode,
                               const std::vector<char>* excludeChar = nullptr,
                               double tol = 0.3);

// Smooth phase-space filter a = chi1 + chi2: chi1 close to 1 deep inside
// gamma1 and exponentially small outside; chi2 of order -m and bounded below
// on gamma2 \ gamma1. Validated by the direction screen at order -m.
struct ConeFilter {
  SymPtr chi1, chi2, total;
  Cone gamma1, gamma2;
  double m = 0.0;
  CharSetEstimate charCheck;
  bool valid = false;
};

ConeFilter buildConeFilter(const Cone& gamma1, const Cone& gamma2, double m,
                           double wRadial = 1.0);

struct FilterRegionVerdict {
  std::string region;
  bool skipped = true;  // no singular directions found in the region
  std::vector<DirectionViolation> violations;
  int checkedCount = 0;
  bool pass() const { return violations.empty(); }
};

struct FilterReport {
  double m = 0.0, tol = 0.3;
  FilterRegionVerdict preserved;  // gamma1 \ gamma2: thresholds unchanged
  FilterRegionVerdict raised;     // gamma2 \ gamma1: thresholds up by m
  bool pass() const { return preserved.pass() && raised.pass(); }
};

// Region-resolved threshold comparison for the filter example.
FilterReport filterOrderReport(const WavefrontEstimate& before,
                               const WavefrontEstimate& after, double m,
                               const Cone& gamma1, const Cone& gamma2,
                               double tol = 0.3);

}  // namespace gmla
