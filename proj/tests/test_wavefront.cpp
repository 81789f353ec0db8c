#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gmla/operators.hpp"
#include "gmla/wavefront.hpp"

using namespace gmla;

namespace {

// Expected set: all directions within tolSteps of one of the given angles.
std::vector<char> anglesToSet(const std::vector<double>& angles, int D,
                              int tolSteps) {
  std::vector<char> v(D, 0);
  for (double a : angles) {
    int c = static_cast<int>(std::lround(Cone::wrapAngle(a) / kTwoPi * D));
    for (int k = -tolSteps; k <= tolSteps; ++k) v[((c + k) % D + D) % D] = 1;
  }
  return v;
}

bool setEmpty(const std::vector<char>& v) {
  for (char c : v)
    if (c) return false;
  return true;
}

// Every flagged direction of a lies within tolSteps of a flagged direction
// of b (one-sided: a is contained in the tolSteps-dilation of b).
bool containedWithin(const std::vector<char>& a, const std::vector<char>& b,
                     int tolSteps) {
  int n = static_cast<int>(a.size());
  for (int i = 0; i < n; ++i) {
    if (!a[i]) continue;
    bool hit = false;
    for (int k = -tolSteps; k <= tolSteps && !hit; ++k)
      hit = b[((i + k) % n + n) % n] != 0;
    if (!hit) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("direction set comparison helper") {
  std::vector<char> a(36, 0), b(36, 0);
  a[10] = 1;
  b[11] = 1;
  CHECK(directionSetsAgree(a, b, 1));
  CHECK(!directionSetsAgree(a, b, 0));
  b[11] = 0;
  b[0] = 1;
  a[10] = 0;
  a[35] = 1;  // wrap-around neighbor
  CHECK(directionSetsAgree(a, b, 1));
}

TEST_CASE("analytic path: singular directions of the canonical examples") {
  WfOptions opt;
  const double chirpDir = std::atan2(2.0, 1.0);

  auto pw = closedFormWF(parseSignal("planewave(5)"), opt);
  CHECK(directionSetsAgree(pw.gaborSet(), anglesToSet({0.0, kPi}, opt.D, 3),
                           3));

  auto dd = closedFormWF(parseSignal("dirac()"), opt);
  CHECK(directionSetsAgree(
      dd.gaborSet(), anglesToSet({kPi / 2, 3 * kPi / 2}, opt.D, 3), 3));

  auto ch = closedFormWF(parseSignal("chirp(2)"), opt);
  CHECK(directionSetsAgree(
      ch.gaborSet(), anglesToSet({chirpDir, chirpDir + kPi}, opt.D, 3), 3));

  CHECK(setEmpty(closedFormWF(parseSignal("gauss(0, 0)"), opt).gaborSet()));
  CHECK(setEmpty(closedFormWF(parseSignal("hermite(4)"), opt).gaborSet()));
}

TEST_CASE("analytic path: threshold of the point mass is -1/2") {
  WfOptions opt;
  opt.fitHi = 500.0;
  auto dd = closedFormWF(parseSignal("dirac()"), opt);
  int up = opt.D / 4, down = 3 * opt.D / 4;
  CHECK(dd.dirs[up].sStar == doctest::Approx(-0.5).epsilon(0.2));
  CHECK(std::abs(dd.dirs[up].sStar + 0.5) < 0.1);
  CHECK(std::abs(dd.dirs[down].sStar + 0.5) < 0.1);
  // Away from the vertical axis the threshold is infinite.
  CHECK(std::isinf(dd.dirs[0].sStar));
  CHECK(std::isinf(dd.dirs[opt.D / 8].sStar));
}

TEST_CASE("threshold membership grows with s") {
  WfOptions opt;
  for (const char* s : {"dirac()", "planewave(5)", "chirp(2)"}) {
    auto est = closedFormWF(parseSignal(s), opt);
    std::vector<char> prev(opt.D, 0);
    for (double sv : {-2.0, -0.5, 0.0, 1.0, 4.0}) {
      auto cur = est.sobolevSet(sv);
      for (int i = 0; i < opt.D; ++i)
        if (prev[i]) CHECK(cur[i]);
      prev = cur;
    }
  }
}

TEST_CASE("union of threshold sets matches the decay-based set") {
  // Compared over conclusive directions only: where the shell-mass profile
  // is too aliased to fit, the estimator flags the direction instead of
  // reporting a threshold, and such directions stay rare.
  WfOptions opt;
  for (const char* s :
       {"dirac()", "planewave(5)", "chirp(2)", "gauss(0, 0)", "hermite(3)"}) {
    auto est = closedFormWF(parseSignal(s), opt);
    CAPTURE(std::string(s));
    CHECK(est.inconclusiveCount() <= opt.D / 20);
    auto f = est.finiteThresholdSet();
    auto g = est.gaborSet();
    std::vector<char> fc(f), gc(g);
    for (int i = 0; i < opt.D; ++i)
      if (est.dirs[i].inconclusive) fc[i] = gc[i] = 0;
    CHECK(containedWithin(fc, g, opt.coneSteps));
    CHECK(containedWithin(gc, f, opt.coneSteps));
  }
}

TEST_CASE("grid path brackets the analytic direction sets") {
  // A window of unit width read out to radius R resolves the singular cone
  // only to roughly atan(4/R); with R ~ 11 that is about 20 degrees. The
  // grid estimate must cover the true directions tightly and may widen them
  // by no more than that resolution limit.
  PhaseGrid g = PhaseGrid::make(1, 16.0, 256);
  Window w = makeWindow(g, "gaussian");
  WfOptions opt;
  const int resSteps = 25;
  auto pw = gaborWF(sampleSignal(parseSignal("planewave(1)"), g), w, opt);
  auto pwTrue = anglesToSet({0.0, kPi}, opt.D, 0);
  CHECK(containedWithin(pwTrue, pw.gaborSet(), 3));
  CHECK(containedWithin(pw.gaborSet(), pwTrue, resSteps));
  auto dd = gaborWF(sampleSignal(parseSignal("dirac()"), g), w, opt);
  auto ddTrue = anglesToSet({kPi / 2, 3 * kPi / 2}, opt.D, 0);
  CHECK(containedWithin(ddTrue, dd.gaborSet(), 3));
  CHECK(containedWithin(dd.gaborSet(), ddTrue, resSteps));
  CHECK(setEmpty(
      gaborWF(sampleSignal(parseSignal("gauss(0, 0)"), g), w, opt).gaborSet()));
  CHECK(setEmpty(
      gaborWF(sampleSignal(parseSignal("hermite(5)"), g), w, opt).gaborSet()));

  // Doubling the readable radius tightens the bracket.
  PhaseGrid g2 = PhaseGrid::make(1, 32.0, 1024);
  Window w2 = makeWindow(g2, "gaussian");
  auto pw2 = gaborWF(sampleSignal(parseSignal("planewave(1)"), g2), w2, opt);
  CHECK(containedWithin(pwTrue, pw2.gaborSet(), 3));
  CHECK(containedWithin(pw2.gaborSet(), pwTrue, 15));
}

TEST_CASE("window choice does not move the direction sets") {
  PhaseGrid g = PhaseGrid::make(1, 16.0, 256);
  Window wg = makeWindow(g, "gaussian");
  Window wh = makeWindow(g, "hermite(1)");
  WfOptions opt;
  for (const char* s : {"planewave(1)", "dirac()", "gauss(0, 0)"}) {
    auto u = sampleSignal(parseSignal(s), g);
    CAPTURE(s);
    CHECK(directionSetsAgree(gaborWF(u, wg, opt).gaborSet(),
                             gaborWF(u, wh, opt).gaborSet(), opt.coneSteps));
  }
}

TEST_CASE("operators of order m shift thresholds by at most m") {
  PhaseGrid g = PhaseGrid::make(1, 16.0, 256);
  Window w = makeWindow(g, "gaussian");
  WfOptions opt;
  auto a = parseSymbol("bracket(2)");
  auto u = sampleSignal(parseSignal("planewave(1)"), g);
  auto before = gaborWF(u, w, opt);

  OperatorRep op = weylQuantize(a, g);
  auto afterWeyl = gaborWF(applyOperator(op, u), w, opt);
  auto afterWick = gaborWF(antiWickApply(a, u), w, opt);

  for (const auto* after : {&afterWeyl, &afterWick}) {
    InclusionReport micro =
        inclusionCheck(before, *after, 2.0, InclusionMode::Microlocal);
    CHECK(micro.pass());
    InclusionReport ell =
        inclusionCheck(before, *after, 2.0, InclusionMode::Microelliptic);
    CHECK(ell.pass());
  }
  // Elliptic equality at the singular direction itself.
  CHECK(std::abs(afterWeyl.dirs[0].sStar - (before.dirs[0].sStar - 2.0)) <
        0.3);
  CHECK(std::abs(afterWick.dirs[0].sStar - (before.dirs[0].sStar - 2.0)) <
        0.3);

  // The identity leaves thresholds untouched.
  InclusionReport id =
      inclusionCheck(before, before, 0.0, InclusionMode::Microlocal);
  CHECK(id.pass());
}

TEST_CASE("cone filter construction validates at order -m") {
  double d = kPi / 180.0;
  Cone g1 = Cone::make(-80 * d, 80 * d, 1.0);
  Cone g2 = Cone::make(70 * d, 290 * d, 1.0);
  ConeFilter f = buildConeFilter(g1, g2, 2.0);
  CHECK(f.valid);

  // ~1 deep inside gamma1 \ gamma2, up to an order -2 correction.
  for (double r : {10.0, 30.0}) {
    double v = std::abs(evalSymbol(f.total, r, 0.0));
    CHECK(std::abs(v - 1.0) < 3.0 / (r * r));
  }
  // Comparable to <z>^-2 deep inside gamma2 \ gamma1.
  for (double r : {10.0, 30.0}) {
    double v = std::abs(evalSymbol(f.total, -r, 0.0)) * (1.0 + r * r);
    CHECK(v > 0.3);
    CHECK(v < 3.0);
  }

  CHECK_THROWS_AS(
      buildConeFilter(Cone::make(0.0, 1.0, 1.0), Cone::make(2.0, 3.0, 1.0),
                      2.0),
      std::invalid_argument);
}

TEST_CASE("filter keeps region-1 orders and raises region-2 orders by m") {
  double d = kPi / 180.0;
  Cone g1 = Cone::make(-80 * d, 80 * d, 1.0);
  Cone g2 = Cone::make(70 * d, 290 * d, 1.0);
  ConeFilter f = buildConeFilter(g1, g2, 2.0);
  REQUIRE(f.valid);

  PhaseGrid g = PhaseGrid::make(1, 16.0, 256);
  Window w = makeWindow(g, "gaussian");
  WfOptions opt;
  auto u = sampleSignal(parseSignal("planewave(1)"), g);
  auto before = gaborWF(u, w, opt);
  auto after = gaborWF(antiWickApply(f.total, u), w, opt);

  FilterReport rep = filterOrderReport(before, after, 2.0, g1, g2);
  CHECK(!rep.preserved.skipped);
  CHECK(!rep.raised.skipped);
  CHECK(rep.preserved.pass());
  CHECK(rep.raised.pass());

  // A Schwartz-class input has nothing to report in either region.
  auto sb = gaborWF(sampleSignal(parseSignal("gauss(0, 0)"), g), w, opt);
  auto sa = gaborWF(
      antiWickApply(f.total, sampleSignal(parseSignal("gauss(0, 0)"), g)), w,
      opt);
  FilterReport srep = filterOrderReport(sb, sa, 2.0, g1, g2);
  CHECK(srep.preserved.skipped);
  CHECK(srep.raised.skipped);
  CHECK(srep.pass());
}
