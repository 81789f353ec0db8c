// Command-line front end: runs the analyses and writes JSON/CSV reports.
//
// Exit codes: 0 success / check passed, 1 check failed or numeric failure,
// 2 usage or configuration error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gmla/expr_error.hpp"
#include "gmla/operators.hpp"
#include "gmla/report.hpp"
#include "gmla/stft.hpp"
#include "gmla/symbol_calculus.hpp"
#include "gmla/wavefront.hpp"

using namespace gmla;

namespace {

constexpr double kDeg = kPi / 180.0;

struct GridOpts {
  double L = 16.0;
  int N = 256;
  int oversample = 1;
  std::string window = "gaussian";
};

void addGridOpts(CLI::App* sub, GridOpts& g) {
  sub->add_option("--L", g.L, "half-width of the spatial interval");
  sub->add_option("--N", g.N, "number of spatial samples");
  sub->add_option("--oversample", g.oversample, "frequency oversampling");
  sub->add_option("--window", g.window, "window spec: gaussian | hermite(k)");
}

struct WfOpts {
  int D = 360;
  double fitLo = 0.0;  // 0: path default
  double fitHi = 0.0;
  std::string path = "auto";  // auto | grid | closedform
};

void addWfOpts(CLI::App* sub, WfOpts& o) {
  sub->add_option("--dirs", o.D, "number of sampled directions");
  sub->add_option("--fit-lo", o.fitLo, "inner fit radius (0: default)");
  sub->add_option("--fit-hi", o.fitHi, "outer fit radius (0: default)");
  sub->add_option("--path", o.path, "auto | grid | closedform")
      ->check(CLI::IsMember({"auto", "grid", "closedform"}));
}

json gridConfig(const GridOpts& g) {
  return json{{"L", g.L},
              {"N", g.N},
              {"oversample", g.oversample},
              {"window", g.window}};
}

PhaseGrid makeGrid(const GridOpts& g) {
  return PhaseGrid::make(1, g.L, g.N, g.oversample);
}

void noteBoundary(const SampledSignal& u, std::vector<std::string>& warnings) {
  if (u.boundaryWarning)
    warnings.push_back("signal does not decay at the boundary (ratio " +
                       fmt17(u.boundaryRatio) + ")");
}

void noteInconclusive(const WavefrontEstimate& e, const std::string& label,
                      std::vector<std::string>& warnings) {
  int n = e.inconclusiveCount();
  if (n > 0)
    warnings.push_back(label + ": " + std::to_string(n) +
                       " inconclusive directions");
}

void writeEnvelope(const std::string& outDir, const std::string& name,
                   ReportEnvelope& env,
                   std::chrono::steady_clock::time_point t0) {
  env.timingMs = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  std::filesystem::create_directories(outDir);
  atomicWrite((std::filesystem::path(outDir) / (name + "_report.json"))
                  .string(),
              env.toJson().dump(2) + "\n");
}

void writeSide(const std::string& outDir, const std::string& name,
               const std::string& content) {
  std::filesystem::create_directories(outDir);
  atomicWrite((std::filesystem::path(outDir) / name).string(), content);
}

std::vector<double> inDegrees(const std::vector<char>& set, int D) {
  std::vector<double> out;
  for (int i = 0; i < D; ++i)
    if (set[i]) out.push_back(360.0 * i / D);
  return out;
}

WavefrontEstimate runWf(const SignalPtr& expr, const GridOpts& g,
                        const WfOpts& o, std::vector<std::string>& warnings) {
  WfOptions opt;
  opt.D = o.D;
  if (o.fitLo > 0.0) opt.fitLo = o.fitLo;
  if (o.fitHi > 0.0) opt.fitHi = o.fitHi;
  bool closed = o.path == "closedform" ||
                (o.path == "auto" && closedFormSupported(expr));
  if (o.path == "closedform" && !closedFormSupported(expr))
    throw std::invalid_argument(
        "signal has no closed-form transform; use --path grid");
  if (closed) return closedFormWF(expr, opt);
  PhaseGrid grid = makeGrid(g);
  SampledSignal u = sampleSignal(expr, grid);
  noteBoundary(u, warnings);
  return gaborWF(u, makeWindow(grid, g.window), opt);
}

std::vector<char> rotateSet(const std::vector<char>& v, int steps) {
  int n = static_cast<int>(v.size());
  std::vector<char> out(n);
  for (int i = 0; i < n; ++i) out[((i + steps) % n + n) % n] = v[i];
  return out;
}

// ------------------------------------------------------------------ commands

int cmdStft(const std::string& sig, const GridOpts& g,
            const std::string& outDir) {
  auto t0 = std::chrono::steady_clock::now();
  ReportEnvelope env;
  env.command = "stft";
  env.config = gridConfig(g);
  env.config["signal"] = sig;

  PhaseGrid grid = makeGrid(g);
  SampledSignal u = sampleSignal(parseSignal(sig), grid);
  noteBoundary(u, env.warnings);
  PhaseField F = stft(u, makeWindow(grid, g.window));

  writeSide(outDir, "stft_heatmap.csv", heatmapCSV(F));
  writeSide(outDir, "stft_field.csv", fieldCSV(F));
  writeSide(outDir, "stft_field.json", toJson(F).dump() + "\n");
  env.payload = json{{"grid", toJson(grid)},
                     {"window", F.windowDesc},
                     {"max_abs", F.maxAbs()},
                     {"files",
                      {"stft_heatmap.csv", "stft_field.csv",
                       "stft_field.json"}}};
  writeEnvelope(outDir, "stft", env, t0);
  return 0;
}

int cmdWf(const std::string& sig, const GridOpts& g, const WfOpts& o,
          const std::string& mode, double s, const std::string& outDir) {
  auto t0 = std::chrono::steady_clock::now();
  ReportEnvelope env;
  env.command = "wf";
  env.config = gridConfig(g);
  env.config["signal"] = sig;
  env.config["mode"] = mode;
  env.config["s"] = s;
  env.config["dirs"] = o.D;
  env.config["path"] = o.path;

  WavefrontEstimate est = runWf(parseSignal(sig), g, o, env.warnings);
  noteInconclusive(est, "wf", env.warnings);
  env.payload = toJson(est);
  env.payload["in_directions_deg"] =
      inDegrees(mode == "sobolev" ? est.sobolevSet(s) : est.gaborSet(), o.D);
  writeSide(outDir, "wf_polar.csv", polarCSV(est));
  writeEnvelope(outDir, "wf", env, t0);
  return 0;
}

int cmdQnorm(const std::string& sig, const GridOpts& g,
             std::vector<double> sValues, const std::string& method,
             const std::string& sym, double m, const std::string& outDir) {
  auto t0 = std::chrono::steady_clock::now();
  ReportEnvelope env;
  env.command = "qnorm";
  env.config = gridConfig(g);
  env.config["signal"] = sig;
  env.config["s"] = sValues;
  env.config["method"] = method;
  env.config["symbol"] = sym;
  env.config["m"] = m;

  PhaseGrid grid = makeGrid(g);
  SampledSignal u = sampleSignal(parseSignal(sig), grid);
  noteBoundary(u, env.warnings);
  Window w = makeWindow(grid, g.window);
  json norms = json::array();
  if (sValues.empty()) sValues.push_back(0.0);
  for (double s : sValues)
    norms.push_back(toJson(qNorm(u, s, parseQNormMethod(method), w)));
  env.payload["norms"] = std::move(norms);

  int rc = 0;
  if (!sym.empty()) {
    // Boundedness of a^w : Q^s -> Q^{s-m}, checked for grid stability.
    QBoundednessReport rep = qBoundednessCheck(
        parseSymbol(sym), m, sValues.front(), {parseSignal(sig)}, grid);
    env.payload["boundedness"] = toJson(rep);
    rc = rep.pass ? 0 : 1;
  }
  writeEnvelope(outDir, "qnorm", env, t0);
  return rc;
}

int cmdOp(const std::string& sym, const std::string& sig, const GridOpts& g,
          const std::string& quant, const std::string& outDir) {
  auto t0 = std::chrono::steady_clock::now();
  ReportEnvelope env;
  env.command = "op";
  env.config = gridConfig(g);
  env.config["symbol"] = sym;
  env.config["signal"] = sig;
  env.config["quantization"] = quant;

  PhaseGrid grid = makeGrid(g);
  SampledSignal u = sampleSignal(parseSignal(sig), grid);
  noteBoundary(u, env.warnings);
  SymPtr a = parseSymbol(sym);
  SampledSignal v = quant == "weyl" ? applyOperator(weylQuantize(a, grid), u)
                                    : antiWickApply(a, u);
  writeSide(outDir, "op_output.csv", signalCSV(v));
  env.payload = json{{"quantization", quant},
                     {"symbol", prettyPrint(a)},
                     {"input_norm", l2Norm(u)},
                     {"output_norm", l2Norm(v)},
                     {"files", {"op_output.csv"}}};
  writeEnvelope(outDir, "op", env, t0);
  return 0;
}

int cmdSymcheck(const std::string& sym, double m, double mPrime, double rMin,
                double rMax, const std::string& outDir) {
  auto t0 = std::chrono::steady_clock::now();
  ReportEnvelope env;
  env.command = "symcheck";
  env.config = json{{"symbol", sym},  {"m", m},      {"m_prime", mPrime},
                    {"r_min", rMin},  {"r_max", rMax}};

  SymPtr a = parseSymbol(sym);
  SeminormTable table = seminormScreen(a, m, rMin, rMax, 3);
  if (!table.pass)
    env.warnings.push_back("seminorm screen FAIL: declared order unstable");
  CharSetOptions copt;
  copt.rMin = rMin;
  copt.rMax = rMax;
  CharSetEstimate cs = estimateCharSet(a, mPrime, copt);
  MicrosupportOptions mopt;
  mopt.rMin = rMin;
  mopt.rMax = rMax;
  MicrosupportEstimate ms = estimateMicrosupport(a, mopt);

  env.payload = json{{"seminorms", toJson(table)},
                     {"char_set", toJson(cs)},
                     {"microsupport", toJson(ms)}};
  writeEnvelope(outDir, "symcheck", env, t0);
  return table.pass ? 0 : 1;
}

int cmdParametrix(const std::string& sym, double mPrime, int nTerms,
                  double coneLoDeg, double coneHiDeg,
                  const std::string& outDir) {
  auto t0 = std::chrono::steady_clock::now();
  ReportEnvelope env;
  env.command = "parametrix";
  env.config = json{{"symbol", sym},
                    {"m_prime", mPrime},
                    {"n_terms", nTerms},
                    {"cone_lo_deg", coneLoDeg},
                    {"cone_hi_deg", coneHiDeg}};

  Cone cone = Cone::make(coneLoDeg * kDeg, coneHiDeg * kDeg, 2.0);
  SymPtr chi = coneCutoffSymbol(cone, 0.15, 1.0);
  ParametrixResult res =
      parametrixTruncated(parseSymbol(sym), chi, mPrime, nTerms, cone);
  double want = 2.0 * nTerms - 0.3;
  bool pass = res.belowFloor || (res.exponent >= want && res.r2 >= 0.9);
  env.payload = toJson(res);
  env.payload["required_exponent"] = want;
  env.payload["pass"] = pass;
  writeEnvelope(outDir, "parametrix", env, t0);
  return pass ? 0 : 1;
}

int cmdFilterDemo(const std::string& sig, const GridOpts& g, double m,
                  double g1Lo, double g1Hi, double g2Lo, double g2Hi,
                  const std::string& outDir) {
  auto t0 = std::chrono::steady_clock::now();
  ReportEnvelope env;
  env.command = "filter-demo";
  env.config = gridConfig(g);
  env.config["signal"] = sig;
  env.config["m"] = m;
  env.config["gamma1_deg"] = {g1Lo, g1Hi};
  env.config["gamma2_deg"] = {g2Lo, g2Hi};

  ConeFilter filter = buildConeFilter(Cone::make(g1Lo * kDeg, g1Hi * kDeg, 1.0),
                                      Cone::make(g2Lo * kDeg, g2Hi * kDeg, 1.0),
                                      m);
  if (!filter.valid)
    env.warnings.push_back("filter char-set screen found flagged directions");

  PhaseGrid grid = makeGrid(g);
  Window w = makeWindow(grid, g.window);
  SampledSignal u = sampleSignal(parseSignal(sig), grid);
  noteBoundary(u, env.warnings);
  WfOptions opt;
  WavefrontEstimate before = gaborWF(u, w, opt);
  WavefrontEstimate after = gaborWF(antiWickApply(filter.total, u), w, opt);
  FilterReport rep = filterOrderReport(before, after, m, filter.gamma1,
                                       filter.gamma2);
  noteInconclusive(before, "before", env.warnings);
  noteInconclusive(after, "after", env.warnings);

  env.payload = json{{"filter_valid", filter.valid},
                     {"char_set", toJson(filter.charCheck)},
                     {"order_report", toJson(rep)},
                     {"wavefront_before", toJson(before)},
                     {"wavefront_after", toJson(after)}};
  writeEnvelope(outDir, "filter-demo", env, t0);
  return (filter.valid && rep.pass()) ? 0 : 1;
}

// ------------------------------------------------------------------- checks

int checkMoyal(const std::string& sig, const GridOpts& g,
               const std::string& outDir) {
  auto t0 = std::chrono::steady_clock::now();
  ReportEnvelope env;
  env.command = "check moyal";
  env.config = gridConfig(g);
  env.config["signal"] = sig;

  PhaseGrid grid = makeGrid(g);
  SampledSignal u = sampleSignal(parseSignal(sig), grid);
  noteBoundary(u, env.warnings);
  double res = moyalResidual(u, makeWindow(grid, g.window));
  bool pass = res < 1e-6;
  env.payload = json{{"residual", res}, {"tolerance", 1e-6}, {"pass", pass}};
  writeEnvelope(outDir, "check_moyal", env, t0);
  return pass ? 0 : 1;
}

int checkWeylWick(const std::string& sym, const std::string& sig,
                  const GridOpts& g, const std::string& outDir) {
  auto t0 = std::chrono::steady_clock::now();
  ReportEnvelope env;
  env.command = "check weylwick";
  env.config = gridConfig(g);
  env.config["symbol"] = sym;
  env.config["signal"] = sig;

  PhaseGrid grid = makeGrid(g);
  SampledSignal u = sampleSignal(parseSignal(sig), grid);
  noteBoundary(u, env.warnings);
  SymPtr a = parseSymbol(sym);
  SampledSignal lhs = antiWickApply(a, u);
  SampledSignal rhs =
      applyOperator(weylQuantize(wickSmoothPolynomial(a), grid), u);
  double err = 0.0;
  {
    SampledSignal diff = lhs;
    for (int j = 0; j < grid.N; ++j) diff.u[j] -= rhs.u[j];
    err = l2Norm(diff) / l2Norm(u);
  }
  bool pass = err <= 1e-3;
  env.payload = json{{"relative_error", err},
                     {"tolerance", 1e-3},
                     {"smoothed_symbol", prettyPrint(wickSmoothPolynomial(a))},
                     {"pass", pass}};
  writeEnvelope(outDir, "check_weylwick", env, t0);
  return pass ? 0 : 1;
}

int checkInclusion(InclusionMode mode, const std::string& sym, double m,
                   const std::string& sig, const GridOpts& g, const WfOpts& o,
                   const std::string& outDir) {
  auto t0 = std::chrono::steady_clock::now();
  const bool micro = mode == InclusionMode::Microlocal;
  ReportEnvelope env;
  env.command = micro ? "check microlocal" : "check microelliptic";
  env.config = gridConfig(g);
  env.config["symbol"] = sym;
  env.config["m"] = m;
  env.config["signal"] = sig;

  PhaseGrid grid = makeGrid(g);
  Window w = makeWindow(grid, g.window);
  SampledSignal u = sampleSignal(parseSignal(sig), grid);
  noteBoundary(u, env.warnings);
  SymPtr a = parseSymbol(sym);
  WfOptions opt;
  opt.D = o.D;
  WavefrontEstimate before = gaborWF(u, w, opt);

  std::vector<char> charMask;
  const std::vector<char>* maskPtr = nullptr;
  if (!micro) {
    CharSetOptions copt;
    copt.D = o.D;
    CharSetEstimate cs = estimateCharSet(a, m, copt);
    charMask.resize(o.D);
    for (int i = 0; i < o.D; ++i) charMask[i] = !cs.nonHyperchar[i];
    maskPtr = &charMask;
  }

  bool pass = true;
  json pipelines = json::array();
  for (const char* quant : {"weyl", "antiwick"}) {
    SampledSignal v = std::string(quant) == "weyl"
                          ? applyOperator(weylQuantize(a, grid), u)
                          : antiWickApply(a, u);
    WavefrontEstimate after = gaborWF(v, w, opt);
    InclusionReport rep = inclusionCheck(before, after, m, mode, maskPtr);
    pass = pass && rep.pass();
    json p = toJson(rep);
    p["quantization"] = quant;
    pipelines.push_back(std::move(p));
  }
  env.payload = json{{"pass", pass}, {"pipelines", std::move(pipelines)}};
  writeEnvelope(outDir, micro ? "check_microlocal" : "check_microelliptic",
                env, t0);
  return pass ? 0 : 1;
}

int checkWindowInvariance(const std::string& sig, const GridOpts& g,
                          const std::string& outDir) {
  auto t0 = std::chrono::steady_clock::now();
  ReportEnvelope env;
  env.command = "check window-invariance";
  env.config = gridConfig(g);
  env.config["signal"] = sig;

  PhaseGrid grid = makeGrid(g);
  SampledSignal u = sampleSignal(parseSignal(sig), grid);
  noteBoundary(u, env.warnings);
  WfOptions opt;
  auto ga = gaborWF(u, makeWindow(grid, "gaussian"), opt).gaborSet();
  auto he = gaborWF(u, makeWindow(grid, "hermite(1)"), opt).gaborSet();
  bool pass = directionSetsAgree(ga, he, opt.coneSteps);
  env.payload = json{{"pass", pass},
                     {"tolerance_steps", opt.coneSteps},
                     {"gaussian_in_deg", inDegrees(ga, opt.D)},
                     {"hermite1_in_deg", inDegrees(he, opt.D)}};
  writeEnvelope(outDir, "check_window-invariance", env, t0);
  return pass ? 0 : 1;
}

int checkFourierRotation(const std::string& sig, int N,
                         const std::string& outDir) {
  auto t0 = std::chrono::steady_clock::now();
  ReportEnvelope env;
  env.command = "check fourier-rotation";
  env.config = json{{"signal", sig}, {"N", N}};

  PhaseGrid grid = makeSelfDualGrid(N);
  Window w = makeWindow(grid, "gaussian");
  SampledSignal u = sampleSignal(parseSignal(sig), grid);
  noteBoundary(u, env.warnings);
  WfOptions opt;
  auto su = gaborWF(u, w, opt).gaborSet();
  auto sf = gaborWF(fourierTransform(u), w, opt).gaborSet();
  // The transform rotates the wave front set by -90 degrees.
  bool pass =
      directionSetsAgree(sf, rotateSet(su, -opt.D / 4), opt.coneSteps);
  env.payload = json{{"pass", pass},
                     {"tolerance_steps", opt.coneSteps},
                     {"signal_in_deg", inDegrees(su, opt.D)},
                     {"transform_in_deg", inDegrees(sf, opt.D)}};
  writeEnvelope(outDir, "check_fourier-rotation", env, t0);
  return pass ? 0 : 1;
}

int checkUnionEquality(const std::string& sig, const GridOpts& g,
                       const WfOpts& o, const std::string& outDir) {
  auto t0 = std::chrono::steady_clock::now();
  ReportEnvelope env;
  env.command = "check union-equality";
  env.config = gridConfig(g);
  env.config["signal"] = sig;
  env.config["path"] = o.path;

  WavefrontEstimate est = runWf(parseSignal(sig), g, o, env.warnings);
  noteInconclusive(est, "wf", env.warnings);
  const int D = static_cast<int>(est.dirs.size());
  auto f = est.finiteThresholdSet();
  auto gb = est.gaborSet();
  // Compared over conclusive directions, up to the cone resolution.
  auto within = [&](const std::vector<char>& a, const std::vector<char>& b) {
    for (int i = 0; i < D; ++i) {
      if (!a[i] || est.dirs[i].inconclusive) continue;
      bool hit = false;
      for (int k = -est.opts.coneSteps; k <= est.opts.coneSteps && !hit; ++k)
        hit = b[((i + k) % D + D) % D] != 0;
      if (!hit) return false;
    }
    return true;
  };
  bool pass = within(f, gb) && within(gb, f) &&
              est.inconclusiveCount() <= D / 20;
  env.payload = json{{"pass", pass},
                     {"finite_threshold_deg", inDegrees(f, D)},
                     {"gabor_in_deg", inDegrees(gb, D)},
                     {"inconclusive_count", est.inconclusiveCount()}};
  writeEnvelope(outDir, "check_union-equality", env, t0);
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gmla: phase-space analysis toolkit (STFT, Weyl/anti-Wick "
               "operators, Sobolev-Gabor wave front estimates)"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value configuration file");

  std::string outDir = ".";
  app.add_option("--out", outDir, "output directory for reports")
      ->capture_default_str();

  GridOpts g;
  WfOpts wfo;
  std::string signal = "gauss(0, 0)";
  std::string symbol;
  std::string mode = "gabor";
  std::string method = "stft-weighted";
  std::string quant = "weyl";
  std::vector<double> sValues;
  double s = 0.0, m = 2.0, mPrime = 2.0;
  int nTerms = 1, selfDualN = 256;
  double rMin = 5.0, rMax = 50.0;
  double coneLo = 17.0, coneHi = 69.0;
  double g1Lo = -80.0, g1Hi = 80.0, g2Lo = 70.0, g2Hi = 290.0;

  auto* cStft = app.add_subcommand("stft", "sample a signal and emit its "
                                           "short-time Fourier transform");
  cStft->add_option("--signal", signal, "signal expression")->required();
  addGridOpts(cStft, g);

  auto* cWf = app.add_subcommand("wf", "estimate wave front direction sets");
  cWf->add_option("--signal", signal, "signal expression")->required();
  cWf->add_option("--mode", mode, "gabor | sobolev")
      ->check(CLI::IsMember({"gabor", "sobolev"}));
  cWf->add_option("--s", s, "Sobolev order for --mode sobolev");
  addGridOpts(cWf, g);
  addWfOpts(cWf, wfo);

  auto* cQnorm = app.add_subcommand("qnorm", "weighted-space norms");
  cQnorm->add_option("--signal", signal, "signal expression")->required();
  cQnorm->add_option("--s", sValues, "Sobolev orders");
  cQnorm->add_option("--method", method, "stft-weighted | locop | weyl-elliptic");
  cQnorm->add_option("--symbol", symbol,
                     "if set, run the boundedness check for this symbol");
  cQnorm->add_option("--m", m, "declared symbol order");
  addGridOpts(cQnorm, g);

  auto* cOp = app.add_subcommand("op", "apply a quantized symbol");
  cOp->add_option("--symbol", symbol, "symbol expression")->required();
  cOp->add_option("--signal", signal, "signal expression")->required();
  cOp->add_option("--quant", quant, "weyl | antiwick")
      ->check(CLI::IsMember({"weyl", "antiwick"}));
  addGridOpts(cOp, g);

  auto* cSym = app.add_subcommand(
      "symcheck", "seminorm screen, char-set and microsupport estimates");
  cSym->add_option("--symbol", symbol, "symbol expression")->required();
  cSym->add_option("--m", m, "declared order")->required();
  cSym->add_option("--mprime", mPrime, "ellipticity order (default: m)");
  cSym->add_option("--rmin", rMin, "inner annulus radius");
  cSym->add_option("--rmax", rMax, "outer annulus radius");

  auto* cPar = app.add_subcommand("parametrix",
                                  "truncated parametrix on a cone");
  cPar->add_option("--symbol", symbol, "symbol expression")->required();
  cPar->add_option("--mprime", mPrime, "ellipticity order")->required();
  cPar->add_option("--nterms", nTerms, "number of correction terms");
  cPar->add_option("--cone-lo", coneLo, "cone lower angle (degrees)");
  cPar->add_option("--cone-hi", coneHi, "cone upper angle (degrees)");

  auto* cFil = app.add_subcommand("filter-demo",
                                  "cone filter example end-to-end");
  cFil->add_option("--signal", signal, "signal expression");
  cFil->add_option("--m", m, "filter order");
  cFil->add_option("--g1-lo", g1Lo, "gamma1 lower angle (degrees)");
  cFil->add_option("--g1-hi", g1Hi, "gamma1 upper angle (degrees)");
  cFil->add_option("--g2-lo", g2Lo, "gamma2 lower angle (degrees)");
  cFil->add_option("--g2-hi", g2Hi, "gamma2 upper angle (degrees)");
  addGridOpts(cFil, g);

  auto* cCheck = app.add_subcommand("check", "verification suites");
  cCheck->require_subcommand(1);
  auto* kMoyal = cCheck->add_subcommand("moyal", "inversion residual");
  kMoyal->add_option("--signal", signal, "signal expression");
  addGridOpts(kMoyal, g);
  auto* kWW = cCheck->add_subcommand("weylwick",
                                     "localization vs smoothed Weyl");
  kWW->add_option("--symbol", symbol, "polynomial symbol")->required();
  kWW->add_option("--signal", signal, "signal expression");
  addGridOpts(kWW, g);
  auto* kML = cCheck->add_subcommand("microlocal",
                                     "operators do not create singularities");
  auto* kME = cCheck->add_subcommand(
      "microelliptic", "operators do not remove singularities off-char");
  for (auto* k : {kML, kME}) {
    k->add_option("--symbol", symbol, "symbol expression")->required();
    k->add_option("--m", m, "symbol order")->required();
    k->add_option("--signal", signal, "signal expression");
    k->add_option("--dirs", wfo.D, "number of sampled directions");
    addGridOpts(k, g);
  }
  auto* kWin = cCheck->add_subcommand("window-invariance",
                                      "direction sets match across windows");
  kWin->add_option("--signal", signal, "signal expression");
  addGridOpts(kWin, g);
  auto* kFr = cCheck->add_subcommand("fourier-rotation",
                                     "transform rotates the direction set");
  kFr->add_option("--signal", signal, "signal expression");
  kFr->add_option("--N", selfDualN, "self-dual grid size");
  auto* kUe = cCheck->add_subcommand(
      "union-equality", "union of threshold sets vs decay-based set");
  kUe->add_option("--signal", signal, "signal expression");
  addGridOpts(kUe, g);
  addWfOpts(kUe, wfo);

  for (auto* sub : app.get_subcommands({})) {
    sub->fallthrough();
    for (auto* s2 : sub->get_subcommands({})) s2->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*cStft) return cmdStft(signal, g, outDir);
    if (*cWf) return cmdWf(signal, g, wfo, mode, s, outDir);
    if (*cQnorm)
      return cmdQnorm(signal, g, sValues, method, symbol, m, outDir);
    if (*cOp) return cmdOp(symbol, signal, g, quant, outDir);
    if (*cSym) {
      if (cSym->count("--mprime") == 0) mPrime = m;
      return cmdSymcheck(symbol, m, mPrime, rMin, rMax, outDir);
    }
    if (*cPar)
      return cmdParametrix(symbol, mPrime, nTerms, coneLo, coneHi, outDir);
    if (*cFil) {
      if (cFil->count("--signal") == 0) signal = "planewave(1)";
      return cmdFilterDemo(signal, g, m, g1Lo, g1Hi, g2Lo, g2Hi, outDir);
    }
    if (*cCheck) {
      if (*kMoyal) {
        if (kMoyal->count("--signal") == 0) signal = "hermite(3)";
        return checkMoyal(signal, g, outDir);
      }
      if (*kWW) {
        if (kWW->count("--signal") == 0) signal = "hermite(3)";
        return checkWeylWick(symbol, signal, g, outDir);
      }
      if (*kML || *kME) {
        if ((*kML ? kML : kME)->count("--signal") == 0)
          signal = "planewave(1)";
        return checkInclusion(*kML ? InclusionMode::Microlocal
                                   : InclusionMode::Microelliptic,
                              symbol, m, signal, g, wfo, outDir);
      }
      if (*kWin) {
        if (kWin->count("--signal") == 0) signal = "planewave(1)";
        return checkWindowInvariance(signal, g, outDir);
      }
      if (*kFr) {
        if (kFr->count("--signal") == 0) signal = "dirac()";
        return checkFourierRotation(signal, selfDualN, outDir);
      }
      if (*kUe) {
        if (kUe->count("--signal") == 0) signal = "dirac()";
        return checkUnionEquality(signal, g, wfo, outDir);
      }
    }
    std::fprintf(stderr, "no subcommand selected\n");
    return 2;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "expression error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    // Numeric failure: record it in an envelope and signal FAIL.
    ReportEnvelope env;
    env.command = "error";
    env.payload = json{{"error", e.what()}};
    try {
      writeEnvelope(outDir, "error", env, std::chrono::steady_clock::now());
    } catch (...) {
    }
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
