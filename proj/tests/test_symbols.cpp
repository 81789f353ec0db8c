#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "gmla/symbol_calculus.hpp"

using namespace gmla;

TEST_CASE("seminorm screen accepts correct orders and rejects low ones") {
  auto b2 = parseSymbol("bracket(2)");
  SeminormTable ok = seminormScreen(b2, 2.0, 5.0, 50.0, 3);
  CHECK(ok.pass);
  // C_0 = sup <z>^-2 (1 + |z|^2) = 1.
  CHECK(ok.entries[0].constant == doctest::Approx(1.0).epsilon(0.05));

  SeminormTable bad = seminormScreen(b2, 1.0, 5.0, 50.0, 3);
  CHECK(!bad.pass);

  CHECK(seminormScreen(parseSymbol("gaussz"), 0.0, 5.0, 50.0, 3).pass);
  CHECK(seminormScreen(parseSymbol("coneCutoff(0.3, 1.2, 2, 0.15, 1)"), 0.0,
                       5.0, 50.0, 3)
            .pass);
}

TEST_CASE("truncated product reproduces the coordinate commutation terms") {
  auto x = parseSymbol("x");
  auto xi = parseSymbol("xi");
  auto one = parseSymbol("1");
  auto xxi = weylProductTruncated(x, xi, 2);
  auto xix = weylProductTruncated(xi, x, 2);
  CHECK(equal(weylProductTruncated(one, one, 3), one));
  for (double px : {-2.0, 0.5, 3.0})
    for (double pxi : {-1.0, 1.5}) {
      Complex want(px * pxi, 0.5);
      CHECK(std::abs(evalSymbol(xxi, px, pxi) - want) < 1e-12);
      CHECK(std::abs(evalSymbol(xix, px, pxi) - std::conj(want)) < 1e-12);
    }
}

TEST_CASE("truncated product is bilinear") {
  auto a1 = parseSymbol("x^2");
  auto a2 = parseSymbol("gaussz");
  auto b = parseSymbol("bracket(2)");
  auto lhs = weylProductTruncated(
      symSum({a1, symProduct({symConst(2.0), a2})}), b, 3);
  auto p1 = weylProductTruncated(a1, b, 3);
  auto p2 = weylProductTruncated(a2, b, 3);
  for (double px : {0.5, 2.0, -3.0}) {
    Complex want = evalSymbol(p1, px, 1.0) + 2.0 * evalSymbol(p2, px, 1.0);
    CHECK(std::abs(evalSymbol(lhs, px, 1.0) - want) < 1e-12);
  }
}

TEST_CASE("smoothing coefficients") {
  WickCoefficients wc = wickCoefficients(4);
  CHECK(wc.at(0, 0) == 1.0);
  CHECK(wc.at(1, 0) == 0.0);
  CHECK(wc.at(0, 3) == 0.0);
  CHECK(wc.at(1, 1) == 0.0);
  CHECK(wc.at(2, 0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(wc.at(0, 2) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(wc.at(2, 2) == doctest::Approx(0.0625).epsilon(1e-12));
  CHECK(wc.at(4, 0) == doctest::Approx(0.03125).epsilon(1e-12));
}

TEST_CASE("polynomial smoothing of the oscillator symbol") {
  auto a = parseSymbol("x^2 + xi^2");
  auto b = wickSmoothPolynomial(a);
  for (double px : {0.0, 1.0, -2.5})
    for (double pxi : {0.0, 3.0}) {
      Complex want(px * px + pxi * pxi + 1.0, 0.0);
      CHECK(std::abs(evalSymbol(b, px, pxi) - want) < 1e-10);
      // The quadrature path agrees.
      CHECK(std::abs(wickSmoothSample(a, px, pxi) - want) < 1e-6);
    }
  CHECK_THROWS_AS(wickSmoothPolynomial(parseSymbol("gaussz")),
                  std::invalid_argument);
}

TEST_CASE("sampled smoothing: unit symbol and translation covariance") {
  CHECK(std::abs(wickSmoothSample(parseSymbol("1"), 3.0, -2.0) -
                 Complex(1.0, 0.0)) < 1e-14);
  auto a0 = parseSymbol("x^2 + xi^2");
  auto a1 = parseSymbol("(x - 1)^2 + (xi - 2)^2");
  for (double px : {0.0, 2.0})
    CHECK(std::abs(wickSmoothSample(a1, px, 1.0) -
                   wickSmoothSample(a0, px - 1.0, -1.0)) < 1e-12);
}

TEST_CASE("elliptic and vanishing symbols in the direction screen") {
  CharSetOptions opt;
  opt.D = 120;
  CHECK(estimateCharSet(parseSymbol("bracket(2)"), 2.0, opt).empty());

  auto chi = parseSymbol("coneCutoff(0.3, 1.2, 2, 0.15, 1)");
  CharSetEstimate ce = estimateCharSet(chi, 0.0, opt);
  CHECK(!ce.empty());
  auto dirIndex = [&](double th) {
    return static_cast<int>(std::lround(th / kTwoPi * opt.D)) % opt.D;
  };
  CHECK(ce.nonHyperchar[dirIndex(0.75)]);  // plateau center
  CHECK(!ce.nonHyperchar[dirIndex(0.0)]);  // outside the cone
  CHECK(!ce.nonHyperchar[dirIndex(kPi)]);

  // a = x vanishes on the vertical axis.
  CharSetEstimate cx = estimateCharSet(parseSymbol("x"), 1.0, opt);
  CHECK(!cx.nonHyperchar[dirIndex(kPi / 2)]);
  CHECK(!cx.nonHyperchar[dirIndex(3 * kPi / 2)]);
  CHECK(cx.nonHyperchar[dirIndex(0.0)]);
  CHECK(cx.nonHyperchar[dirIndex(kPi)]);

  // Lowering the order can only shrink the failing set.
  CharSetEstimate cx0 = estimateCharSet(parseSymbol("x"), 0.0, opt);
  for (int j = 0; j < opt.D; ++j)
    if (cx.nonHyperchar[j]) CHECK(cx0.nonHyperchar[j]);
}

TEST_CASE("decay-based support estimates") {
  MicrosupportOptions opt;
  opt.D = 120;
  MicrosupportEstimate g = estimateMicrosupport(parseSymbol("gaussz"), opt);
  for (int j = 0; j < opt.D; ++j) {
    CHECK(!g.inSupport[j]);
    CHECK(!g.inconclusive[j]);
  }

  MicrosupportEstimate b = estimateMicrosupport(parseSymbol("bracket(2)"), opt);
  for (int j = 0; j < opt.D; ++j) CHECK(b.inSupport[j]);

  Cone cone = Cone::make(0.3, 1.2, 2.0);
  auto chi = coneCutoffSymbol(cone, 0.15, 1.0);
  MicrosupportEstimate c = estimateMicrosupport(chi, opt);
  for (int j = 0; j < opt.D; ++j) {
    if (!c.inSupport[j]) continue;
    // Support directions stay within the cone's closure (one-step slack).
    double th = c.theta[j];
    bool nearCone = cone.containsAngle(th) ||
                    cone.containsAngle(th + kTwoPi / opt.D) ||
                    cone.containsAngle(th - kTwoPi / opt.D);
    CAPTURE(th);
    CHECK(nearCone);
  }
}

TEST_CASE("parametrix remainders drop two orders per correction term") {
  auto a = parseSymbol("bracket(2)");
  Cone cone = Cone::make(0.3, 1.2, 2.0);
  auto chi = coneCutoffSymbol(cone, 0.15, 1.0);

  ParametrixResult p1 = parametrixTruncated(a, chi, 2.0, 1, cone);
  CHECK(p1.exponent >= 2.0 - 0.3);
  CHECK(p1.r2 >= 0.9);

  ParametrixResult p2 = parametrixTruncated(a, chi, 2.0, 2, cone);
  CHECK(p2.exponent >= 4.0 - 0.3);
  CHECK(p2.r2 >= 0.9);

  // A symbol with a zero ray inside the cone is rejected.
  CHECK_THROWS_AS(parametrixTruncated(parseSymbol("x"), chi, 1.0, 1,
                                      Cone::make(kPi / 2 - 0.3, kPi / 2 + 0.3,
                                                 2.0)),
                  std::domain_error);
}
