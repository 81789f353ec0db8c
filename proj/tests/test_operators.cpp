#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "gmla/operators.hpp"
#include "gmla/symbol_calculus.hpp"

using namespace gmla;

namespace {

// Direct double-loop quadrature of the midpoint kernel, independent of the
// FFT-based assembly.
Eigen::MatrixXcd directWeyl(const SymPtr& a, const PhaseGrid& g) {
  const int N = g.N;
  const double dxi = kTwoPi / (N * g.hx);
  Eigen::MatrixXcd m(N, N);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) {
      double mid = 0.5 * (g.x(j) + g.x(k));
      Complex acc{0.0, 0.0};
      for (int q = 0; q < N; ++q) {
        double xi = (q - N / 2) * dxi;
        acc += std::exp(Complex(0.0, (g.x(j) - g.x(k)) * xi)) *
               evalSymbol(a, mid, xi);
      }
      m(j, k) = acc * dxi * g.hx / kTwoPi;
    }
  return m;
}

SampledSignal randomSignal(const PhaseGrid& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  SampledSignal u;
  u.grid = g;
  u.u.resize(g.N);
  for (auto& v : u.u) v = Complex(nd(rng), nd(rng));
  return u;
}

}  // namespace

TEST_CASE("unit and coordinate symbols quantize exactly") {
  PhaseGrid g = PhaseGrid::make(1, 16.0, 256);
  OperatorRep id = weylQuantize(parseSymbol("1"), g);
  CHECK((id.mat - Eigen::MatrixXcd::Identity(g.N, g.N)).cwiseAbs().maxCoeff() <
        1e-8);

  OperatorRep mx = weylQuantize(parseSymbol("x"), g);
  Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(g.N, g.N);
  for (int j = 0; j < g.N; ++j) want(j, j) = g.x(j);
  CHECK((mx.mat - want).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("fast assembly matches the direct kernel quadrature") {
  PhaseGrid g = PhaseGrid::make(1, 8.0, 64);
  for (const char* s : {"gaussz", "x^2 + xi^2", "x * xi", "bracket(-2)"}) {
    auto a = parseSymbol(s);
    OperatorRep op = weylQuantize(a, g);
    Eigen::MatrixXcd ref = directWeyl(a, g);
    CAPTURE(s);
    CHECK((op.mat - ref).cwiseAbs().maxCoeff() <
          1e-11 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("real symbols give Hermitian matrices") {
  PhaseGrid g = PhaseGrid::make(1, 16.0, 128);
  for (const char* s : {"bracket(2)", "gaussz", "x^2 * xi"}) {
    OperatorRep op = weylQuantize(parseSymbol(s), g);
    CAPTURE(s);
    CHECK((op.mat - op.mat.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("harmonic oscillator spectrum") {
  PhaseGrid g = PhaseGrid::make(1, 16.0, 256);
  OperatorRep op = weylQuantize(parseSymbol("x^2 + xi^2"), g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.mat);
  REQUIRE(es.info() == Eigen::Success);
  for (int k = 0; k <= 8; ++k) {
    double want = 2.0 * k + 1.0;
    CHECK(std::abs(es.eigenvalues()[k] - want) / want < 1e-3);
  }
}

TEST_CASE("operator composition reproduces the product expansion") {
  PhaseGrid g = PhaseGrid::make(1, 16.0, 256);
  OperatorRep wx = weylQuantize(parseSymbol("x"), g);
  OperatorRep wxi = weylQuantize(parseSymbol("xi"), g);
  OperatorRep wprod =
      weylQuantize(parseSymbol("x * xi + complex(0, 0.5)"), g);
  OperatorRep wprodR =
      weylQuantize(parseSymbol("x * xi + complex(0, -0.5)"), g);
  Eigen::MatrixXcd dF = wx.mat * wxi.mat - wprod.mat;
  Eigen::MatrixXcd dR = wxi.mat * wx.mat - wprodR.mat;

  // Restrict to the lowest quarter of the oscillator's spectral band; the
  // outer modes are grid artifacts.
  OperatorRep osc = weylQuantize(parseSymbol("x^2 + xi^2"), g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(osc.mat);
  REQUIRE(es.info() == Eigen::Success);
  Eigen::MatrixXcd band = es.eigenvectors().leftCols(g.N / 4);
  CHECK(operatorNormEstimate(band.adjoint() * dF * band) < 1e-3);
  CHECK(operatorNormEstimate(band.adjoint() * dR * band) < 1e-3);
}

TEST_CASE("composition associativity through matrices") {
  PhaseGrid g = PhaseGrid::make(1, 8.0, 64);
  OperatorRep A = weylQuantize(parseSymbol("bracket(-2)"), g);
  OperatorRep B = weylQuantize(parseSymbol("gaussz"), g);
  SampledSignal u = randomSignal(g, 5);
  SampledSignal two = applyOperator(A, applyOperator(B, u));
  OperatorRep AB{g, A.mat * B.mat, "", "weyl", 0.0};
  SampledSignal one = applyOperator(AB, u);
  double worst = 0.0;
  for (int j = 0; j < g.N; ++j)
    worst = std::max(worst, std::abs(one.u[j] - two.u[j]));
  CHECK(worst < 1e-10 * l2Norm(u));
}

TEST_CASE("localization operator with unit symbol is the identity") {
  PhaseGrid g = PhaseGrid::make(1, 16.0, 256);
  auto u = sampleSignal(parseSignal("hermite(3) + gauss(1, -1)"), g);
  SampledSignal r = antiWickApply(parseSymbol("1"), u);
  double num = 0.0, den = 0.0;
  for (int j = 0; j < g.N; ++j) {
    num += std::norm(r.u[j] - u.u[j]);
    den += std::norm(u.u[j]);
  }
  CHECK(std::sqrt(num / den) < 1e-6);
}

TEST_CASE("nonnegative symbols give nonnegative quadratic forms") {
  PhaseGrid g = PhaseGrid::make(1, 8.0, 64);
  for (unsigned seed : {1u, 2u, 3u}) {
    SampledSignal u = randomSignal(g, seed);
    for (const char* s : {"gaussz", "bracket(2)", "x^2"}) {
      SampledSignal r = antiWickApply(parseSymbol(s), u);
      Complex form{0.0, 0.0};
      for (int j = 0; j < g.N; ++j) form += r.u[j] * std::conj(u.u[j]);
      form *= g.hx;
      CAPTURE(s);
      CHECK(form.real() > -1e-10 * l2Norm(u) * l2Norm(u));
    }
  }
}

TEST_CASE("localization equals Weyl with the smoothed symbol") {
  PhaseGrid g = PhaseGrid::make(1, 16.0, 256);
  for (const char* s : {"1", "x^2 + xi^2", "bracket(2)"}) {
    auto a = parseSymbol(s);
    OperatorRep wb = weylQuantize(wickSmoothPolynomial(a), g);
    for (int k = 0; k <= 5; ++k) {
      auto u = sampleSignal(sigHermite(k), g);
      SampledSignal lhs = antiWickApply(a, u);
      SampledSignal rhs = applyOperator(wb, u);
      double num = 0.0;
      for (int j = 0; j < g.N; ++j) num += std::norm(lhs.u[j] - rhs.u[j]);
      CAPTURE(s);
      CAPTURE(k);
      CHECK(std::sqrt(num * g.hx) / l2Norm(u) < 1e-3);
    }
  }
}

TEST_CASE("weighted norms: normalization, monotonicity, method agreement") {
  PhaseGrid g = PhaseGrid::make(1, 16.0, 256);
  Window w = makeWindow(g, "gaussian");
  auto psi0 = sampleSignal(parseSignal("gauss(0, 0)"), g);
  CHECK(qNorm(psi0, 0.0, QNormMethod::StftWeighted, w).value ==
        doctest::Approx(std::sqrt(kTwoPi)).epsilon(1e-6));

  const double svals[] = {-1.0, 0.0, 1.0, 2.0};
  for (int k = 0; k <= 6; ++k) {
    auto u = sampleSignal(sigHermite(k), g);
    double prev = -1.0;
    for (double s : svals) {
      double v = qNorm(u, s, QNormMethod::StftWeighted, w).value;
      CHECK(v >= prev);  // exact at the quadrature level
      prev = v;
    }
  }

  // The three recipes stay within a fixed mutual constant on the corpus.
  for (double s : svals) {
    double lo = 1e300, hi = 0.0;
    for (int k = 0; k <= 6; ++k) {
      auto u = sampleSignal(sigHermite(k), g);
      double v0 = qNorm(u, s, QNormMethod::StftWeighted, w).value;
      double v1 = qNorm(u, s, QNormMethod::LocOp, w).value;
      double v2 = qNorm(u, s, QNormMethod::WeylElliptic, w).value;
      for (double r : {v1 / v0, v2 / v0}) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    }
    CAPTURE(s);
    CHECK(hi / lo < 4.0);  // a single constant C covers the corpus
    CHECK(lo > 0.1);
    CHECK(hi < 10.0);
  }
}

TEST_CASE("order-m symbols map between weighted spaces stably") {
  PhaseGrid g = PhaseGrid::make(1, 16.0, 256);
  std::vector<SignalPtr> corpus;
  for (int k = 0; k <= 6; ++k) corpus.push_back(sigHermite(k));

  QBoundednessReport idr =
      qBoundednessCheck(parseSymbol("1"), 0.0, 1.0, corpus, g);
  CHECK(idr.pass);
  CHECK(idr.ratio == doctest::Approx(1.0).epsilon(1e-6));

  QBoundednessReport br =
      qBoundednessCheck(parseSymbol("bracket(2)"), 2.0, 2.0, corpus, g);
  CHECK(br.pass);
  CHECK(std::isfinite(br.ratio));
}
