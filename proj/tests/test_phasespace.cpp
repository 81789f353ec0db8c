#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gmla/grid.hpp"
#include "gmla/jet.hpp"
#include "gmla/signal_expr.hpp"
#include "gmla/symbol_expr.hpp"

using namespace gmla;

TEST_CASE("grid construction and dual axes") {
  PhaseGrid g = PhaseGrid::make(1, 16.0, 256, 1);
  CHECK(g.hx == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(g.dxi == doctest::Approx(kPi / 16.0).epsilon(1e-15));
  CHECK(g.x(g.originIndex()) == 0.0);
  CHECK(g.xi(g.nFreq / 2) == 0.0);
  CHECK(g.xiMax() == doctest::Approx(kPi / g.hx));

  PhaseGrid g2 = PhaseGrid::make(1, 16.0, 256, 2);
  CHECK(g2.nFreq == 512);
  CHECK(g2.dxi == doctest::Approx(kPi / 32.0).epsilon(1e-15));

  CHECK_THROWS_AS(PhaseGrid::make(1, 16.0, 200, 1), std::invalid_argument);
  CHECK_THROWS_AS(PhaseGrid::make(1, 16.0, 8, 1), std::invalid_argument);
  CHECK_THROWS_AS(PhaseGrid::make(2, 16.0, 256, 1), std::invalid_argument);
  CHECK_THROWS_AS(PhaseGrid::make(1, -1.0, 256, 1), std::invalid_argument);
}

TEST_CASE("cone membership, wrap-around and scale invariance") {
  Cone c = Cone::make(-0.5, 0.5, 2.0);  // cone around the +x axis
  CHECK(c.contains(5.0, 0.0));
  CHECK(!c.contains(1.0, 0.0));   // inside inner radius
  CHECK(!c.contains(-5.0, 0.0));  // opposite direction
  CHECK(c.contains(5.0, 1.0));
  CHECK(!c.contains(0.0, 5.0));

  // Scale invariance of the angular test.
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  for (int i = 0; i < 50; ++i) {
    double t = ang(rng);
    double r1 = 3.0, r2 = 17.0;
    CHECK(c.contains(r1 * std::cos(t), r1 * std::sin(t)) ==
          c.contains(r2 * std::cos(t), r2 * std::sin(t)));
  }

  // Wrap-around interval.
  Cone w = Cone::make(5.8, 7.0, 0.0);  // crosses 2*pi
  CHECK(w.containsAngle(6.0));
  CHECK(w.containsAngle(0.5));
  CHECK(!w.containsAngle(3.0));

  CHECK_THROWS_AS(Cone::make(1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Cone::make(0.0, 7.0, 0.0), std::invalid_argument);
}

TEST_CASE("jet arithmetic matches hand Taylor expansions") {
  // f(x, xi) = exp(x * xi) at (1, 2): d2f/dxdxi = exp(2)(1 + 2*1*2) etc.
  Jet2 x = Jet2::variableX(1.0, 4);
  Jet2 xi = Jet2::variableXi(2.0, 4);
  Jet2 f = (x * xi).exp();
  double e2 = std::exp(2.0);
  CHECK(f.value() == doctest::Approx(e2).epsilon(1e-12));
  CHECK(f.deriv(1, 0) == doctest::Approx(2.0 * e2).epsilon(1e-12));
  CHECK(f.deriv(0, 1) == doctest::Approx(1.0 * e2).epsilon(1e-12));
  CHECK(f.deriv(1, 1) == doctest::Approx(e2 * (1.0 + 2.0)).epsilon(1e-12));
  CHECK(f.deriv(2, 0) == doctest::Approx(4.0 * e2).epsilon(1e-12));

  // sqrt(1 + x^2 + xi^2) derivatives at (0.3, -0.7).
  Jet2 a = Jet2::variableX(0.3, 3);
  Jet2 b = Jet2::variableXi(-0.7, 3);
  Jet2 r = (a * a + b * b + 1.0).sqrt();
  double v = std::sqrt(1.0 + 0.09 + 0.49);
  CHECK(r.value() == doctest::Approx(v).epsilon(1e-13));
  CHECK(r.deriv(1, 0) == doctest::Approx(0.3 / v).epsilon(1e-12));
  CHECK(r.deriv(0, 1) == doctest::Approx(-0.7 / v).epsilon(1e-12));
}

TEST_CASE("signal parser round trip and errors") {
  const char* cases[] = {
      "gauss(0, 0)",
      "planewave(5) + 2 * dirac()",
      "chirp(2) * planewave(1.5)",
      "hermite(3) + deltaApprox(0.05)",
      "-2.5 * gauss(1, -2)",
      "(gauss(0, 0) + hermite(1))^2",
  };
  for (const char* s : cases) {
    auto e = parseSignal(s);
    auto printed = prettyPrint(e);
    auto e2 = parseSignal(printed);
    CAPTURE(s);
    CAPTURE(printed);
    CHECK(equal(e, e2));
    CHECK(prettyPrint(e2) == printed);
  }

  CHECK_THROWS_AS(parseSignal("gauss(,1)"), ParseError);
  CHECK_THROWS_AS(parseSignal("gauss(1)"), ParseError);
  CHECK_THROWS_AS(parseSignal("unknownfunc(1)"), ParseError);
  CHECK_THROWS_AS(parseSignal("gauss(0,0) +"), ParseError);
  CHECK_THROWS_AS(parseSignal("hermite(-1)"), ParseError);
  try {
    parseSignal("planewave(5) + @");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.offset() == 15);
  }
}

TEST_CASE("symbol parser round trip") {
  const char* cases[] = {
      "bracket(2)",
      "x^2 + xi^2 + 1",
      "gaussz * bracket(-2)",
      "bracket(2)^-1",
      "complex(0, 0.5) + x * xi",
      "coneCutoff(0.3, 1.2, 2, 0.15, 1)",
      "coneSigmoid(0.3, 1.2, 2, 1, 7.5)",
      "deriv(coneCutoff(0.3, 1.2, 2, 0.15, 1), 1, 2)",
  };
  for (const char* s : cases) {
    auto e = parseSymbol(s);
    auto printed = prettyPrint(e);
    CAPTURE(s);
    CAPTURE(printed);
    auto e2 = parseSymbol(printed);
    CHECK(equal(e, e2));
    CHECK(prettyPrint(e2) == printed);
  }
  CHECK_THROWS_AS(parseSymbol("bracket()"), ParseError);
  CHECK_THROWS_AS(parseSymbol("gauss(0,0)"), ParseError);
}

TEST_CASE("declared orders") {
  CHECK(declaredOrder(parseSymbol("bracket(2)")) == 2.0);
  CHECK(declaredOrder(parseSymbol("x^2 + xi^2")) == 2.0);
  CHECK(declaredOrder(parseSymbol("bracket(2) * bracket(-4)")) == -2.0);
  CHECK(declaredOrder(parseSymbol("bracket(3)^-1")) == -3.0);
  CHECK(declaredOrder(parseSymbol("gaussz")) ==
        -std::numeric_limits<double>::infinity());
  CHECK(declaredOrder(parseSymbol("coneCutoff(0.3, 1.2, 2, 0.15, 1)")) == 0.0);
}

static double fdDeriv(const SymPtr& e, int ax, int axi, double x, double xi) {
  // Central finite differences, step tuned for mixed 1st/2nd order.
  double h = 1e-4;
  auto f = [&](double a, double b) {
    return evalSymbol(e, a, b).real();
  };
  if (ax == 1 && axi == 0)
    return (f(x + h, xi) - f(x - h, xi)) / (2 * h);
  if (ax == 0 && axi == 1)
    return (f(x, xi + h) - f(x, xi - h)) / (2 * h);
  if (ax == 1 && axi == 1)
    return (f(x + h, xi + h) - f(x + h, xi - h) - f(x - h, xi + h) +
            f(x - h, xi - h)) /
           (4 * h * h);
  if (ax == 2 && axi == 0)
    return (f(x + h, xi) - 2 * f(x, xi) + f(x - h, xi)) / (h * h);
  if (ax == 0 && axi == 2)
    return (f(x, xi + h) - 2 * f(x, xi) + f(x, xi - h)) / (h * h);
  throw std::logic_error("fdDeriv: unsupported order");
}

TEST_CASE("symbolic derivatives match finite differences at random points") {
  auto exprs = {
      parseSymbol("bracket(2)"),
      parseSymbol("bracket(-1.5)"),
      parseSymbol("gaussz"),
      parseSymbol("x^2 * xi + bracket(2) * gaussz"),
      parseSymbol("bracket(2)^-1"),
      parseSymbol("coneCutoff(0.2, 1.4, 1, 0.2, 1.5)"),
      parseSymbol("coneSigmoid(0.2, 1.4, 1, 1.5, 6)"),
  };
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> pos(2.0, 9.0);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  for (const auto& e : exprs) {
    for (int trial = 0; trial < 20; ++trial) {
      double r = pos(rng), t = ang(rng);
      double x = r * std::cos(t), xi = r * std::sin(t);
      for (auto [ax, axi] : {std::pair{1, 0}, std::pair{0, 1},
                             std::pair{1, 1}, std::pair{2, 0},
                             std::pair{0, 2}}) {
        double exact = evalSymbolDeriv(e, ax, axi, x, xi).real();
        double fd = fdDeriv(e, ax, axi, x, xi);
        double scale = std::max({1.0, std::abs(exact), std::abs(fd)});
        CAPTURE(prettyPrint(e));
        CAPTURE(x);
        CAPTURE(xi);
        CAPTURE(ax);
        CAPTURE(axi);
        CHECK(std::abs(exact - fd) / scale < 1e-5);
      }
    }
  }
}

TEST_CASE("cone cutoff plateau and support are exact") {
  Cone c = Cone::make(0.3, 1.2, 2.0);
  auto chi = coneCutoffSymbol(c, 0.15, 1.0);
  double mid = 0.75;  // cone center angle
  // Deep plateau: radius beyond R + wRadial, angle in the inner interval.
  for (double r : {4.0, 9.0, 30.0})
    CHECK(evalSymbol(chi, r * std::cos(mid), r * std::sin(mid)).real() ==
          doctest::Approx(1.0).epsilon(1e-15));
  // Outside the cone: exactly zero.
  CHECK(evalSymbol(chi, 5.0, 0.0).real() == 0.0);
  CHECK(evalSymbol(chi, -3.0, 4.0).real() == 0.0);
  CHECK(evalSymbol(chi, 0.5 * std::cos(mid), 0.5 * std::sin(mid)).real() ==
        0.0);  // inside the ball
  // Transition takes intermediate values.
  double v = evalSymbol(chi, 2.6 * std::cos(mid), 2.6 * std::sin(mid)).real();
  CHECK(v > 0.0);
  CHECK(v < 1.0);
  // Derivatives on the plateau vanish identically.
  CHECK(evalSymbolDeriv(chi, 1, 1, 8.0 * std::cos(mid), 8.0 * std::sin(mid))
            .real() == 0.0);
}

TEST_CASE("sampling linearity and dirac spike") {
  PhaseGrid g = PhaseGrid::make(1, 16.0, 256);
  auto e1 = parseSignal("gauss(1, 2)");
  auto e2 = parseSignal("hermite(2)");
  auto s1 = sampleSignal(e1, g);
  auto s2 = sampleSignal(e2, g);
  auto sboth = sampleSignal(parseSignal("gauss(1, 2) + 0.5 * hermite(2)"), g);
  for (int j = 0; j < g.N; ++j) {
    Complex want = s1.u[j] + 0.5 * s2.u[j];
    CHECK(std::abs(sboth.u[j] - want) < 1e-14);
  }
  auto d = sampleSignal(sigDirac(), g);
  CHECK(d.u[g.originIndex()].real() == doctest::Approx(1.0 / g.hx));
  CHECK(l2Norm(d) == doctest::Approx(1.0 / std::sqrt(g.hx)));
}

TEST_CASE("boundary decay diagnostic") {
  PhaseGrid g = PhaseGrid::make(1, 16.0, 256);
  CHECK(!sampleSignal(parseSignal("gauss(0, 0)"), g).boundaryWarning);
  // A Gaussian centered near the boundary has no decay there.
  CHECK(sampleSignal(parseSignal("gauss(15, 0)"), g).boundaryWarning);
  // Plane waves and chirps are exempt.
  CHECK(!sampleSignal(parseSignal("planewave(5)"), g).boundaryWarning);
  CHECK(!sampleSignal(parseSignal("chirp(2)"), g).boundaryWarning);
}

TEST_CASE("hermite functions are orthonormal under grid quadrature") {
  PhaseGrid g = PhaseGrid::make(1, 16.0, 256);
  for (int a = 0; a <= 4; ++a)
    for (int b = a; b <= 4; ++b) {
      double acc = 0.0;
      for (int j = 0; j < g.N; ++j)
        acc += hermiteFunction(a, g.x(j)) * hermiteFunction(b, g.x(j));
      acc *= g.hx;
      CHECK(acc == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-10));
    }
}
