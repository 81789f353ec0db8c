#include "gmla/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace gmla {

namespace {

// JSON has no infinity; thresholds and exponents use a string sentinel.
json num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

}  // namespace

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json ReportEnvelope::toJson() const {
  json j;
  j["schema_version"] = schemaVersion;
  j["command"] = command;
  j["config"] = config;
  j["payload"] = payload;
  j["warnings"] = warnings;
  j["timing_ms"] = timingMs;
  return j;
}

std::string ReportEnvelope::payloadBytes() const {
  json j;
  j["schema_version"] = schemaVersion;
  j["command"] = command;
  j["config"] = config;
  j["payload"] = payload;
  j["warnings"] = warnings;
  return j.dump();
}

void atomicWrite(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  std::filesystem::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, p);
}

json toJson(const PhaseGrid& g) {
  return json{{"d", g.d},          {"L", g.L},
              {"N", g.N},          {"oversample", g.oversample},
              {"hx", g.hx},        {"dxi", g.dxi},
              {"n_freq", g.nFreq}};
}

json toJson(const PhaseField& f) {
  json j;
  j["grid"] = toJson(f.grid);
  j["window"] = f.windowDesc;
  json re = json::array(), im = json::array();
  for (const Complex& v : f.V) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

json toJson(const SeminormTable& t) {
  json j;
  j["m"] = t.m;
  j["r_min"] = t.rMin;
  j["r_max"] = t.rMax;
  j["K"] = t.K;
  j["pass"] = t.pass;
  j["max_growth"] = t.maxGrowth;
  json rows = json::array();
  for (const auto& e : t.entries)
    rows.push_back(json{{"ax", e.ax},
                        {"axi", e.axi},
                        {"constant", num(e.constant)},
                        {"extended", num(e.extended)}});
  j["entries"] = std::move(rows);
  return j;
}

json toJson(const CharSetEstimate& c) {
  json j;
  j["m_prime"] = c.mPrime;
  j["tau_low"] = c.tauLow;
  j["tau_ratio"] = c.tauRatio;
  j["empty"] = c.empty();
  json rows = json::array();
  for (size_t i = 0; i < c.theta.size(); ++i)
    rows.push_back(json{{"theta", c.theta[i]},
                        {"c_low", num(c.cLow[i])},
                        {"ratio", num(c.ratio[i])},
                        {"hyperchar", !c.nonHyperchar[i]}});
  j["directions"] = std::move(rows);
  return j;
}

json toJson(const MicrosupportEstimate& m) {
  json j;
  json rows = json::array();
  for (size_t i = 0; i < m.theta.size(); ++i)
    rows.push_back(json{{"theta", m.theta[i]},
                        {"exponent", num(m.exponent[i])},
                        {"r2", m.r2[i]},
                        {"in_support", static_cast<bool>(m.inSupport[i])},
                        {"inconclusive",
                         static_cast<bool>(m.inconclusive[i])}});
  j["directions"] = std::move(rows);
  return j;
}

json toJson(const ParametrixResult& p) {
  return json{{"symbol", prettyPrint(p.b)},
              {"remainder", prettyPrint(p.remainder)},
              {"exponent", num(p.exponent)},
              {"r2", p.r2},
              {"below_floor", p.belowFloor}};
}

json toJson(const QNormReport& q) {
  return json{{"s", q.s},
              {"method", qNormMethodName(q.method)},
              {"window", q.windowDesc},
              {"value", q.value}};
}

json toJson(const QBoundednessReport& q) {
  return json{{"s", q.s},          {"m", q.m},
              {"ratio", q.ratio},  {"ratio_refined", q.ratioRefined},
              {"change", q.change}, {"pass", q.pass}};
}

json toJson(const WavefrontEstimate& e) {
  json j;
  j["directions_total"] = static_cast<int>(e.dirs.size());
  j["inconclusive_count"] = e.inconclusiveCount();
  json rows = json::array();
  for (const auto& d : e.dirs)
    rows.push_back(json{{"theta", d.theta},
                        {"gamma_g", num(d.gammaG)},
                        {"r2_sup", d.r2G},
                        {"gamma_mass", num(d.gamma2)},
                        {"r2_mass", d.r2M},
                        {"s_star", num(d.sStar)},
                        {"gabor_in", static_cast<bool>(d.gaborIn)},
                        {"inconclusive", static_cast<bool>(d.inconclusive)},
                        {"fit_lo", d.fitLo},
                        {"fit_hi", d.fitHi}});
  j["directions"] = std::move(rows);
  return j;
}

json toJson(const InclusionReport& r) {
  json j;
  j["mode"] = r.mode == InclusionMode::Microlocal ? "microlocal"
                                                  : "microelliptic";
  j["order_shift"] = r.orderShift;
  j["tol"] = r.tol;
  j["pass"] = r.pass();
  j["skipped_inconclusive"] = r.skippedInconclusive;
  j["skipped_char"] = r.skippedChar;
  json rows = json::array();
  for (const auto& v : r.violations)
    rows.push_back(json{{"theta", v.theta},
                        {"before", num(v.before)},
                        {"after", num(v.after)},
                        {"excess", v.excess}});
  j["violations"] = std::move(rows);
  return j;
}

json toJson(const FilterReport& r) {
  auto region = [](const FilterRegionVerdict& v) {
    json j;
    j["region"] = v.region;
    j["skipped"] = v.skipped;
    j["checked"] = v.checkedCount;
    j["pass"] = v.pass();
    json rows = json::array();
    for (const auto& w : v.violations)
      rows.push_back(json{{"theta", w.theta},
                          {"before", num(w.before)},
                          {"after", num(w.after)},
                          {"excess", w.excess}});
    j["violations"] = std::move(rows);
    return j;
  };
  return json{{"m", r.m},
              {"tol", r.tol},
              {"pass", r.pass()},
              {"preserved", region(r.preserved)},
              {"raised", region(r.raised)}};
}

std::string heatmapCSV(const PhaseField& f) {
  std::string out = "# x, xi, abs_V\n";
  const PhaseGrid& g = f.grid;
  for (int j = 0; j < g.N; ++j)
    for (int k = 0; k < g.nFreq; ++k) {
      out += fmt17(g.x(j));
      out += ',';
      out += fmt17(g.xi(k));
      out += ',';
      out += fmt17(std::abs(f.at(j, k)));
      out += '\n';
    }
  return out;
}

std::string fieldCSV(const PhaseField& f) {
  std::string out = "# x, xi, re, im\n";
  const PhaseGrid& g = f.grid;
  for (int j = 0; j < g.N; ++j)
    for (int k = 0; k < g.nFreq; ++k) {
      Complex v = f.at(j, k);
      out += fmt17(g.x(j));
      out += ',';
      out += fmt17(g.xi(k));
      out += ',';
      out += fmt17(v.real());
      out += ',';
      out += fmt17(v.imag());
      out += '\n';
    }
  return out;
}

std::string polarCSV(const WavefrontEstimate& e) {
  // flag: 0 regular, 1 in the wave front set, 2 inconclusive.
  std::string out = "# theta, gamma_G, s_star, flag\n";
  for (const auto& d : e.dirs) {
    int flag = d.inconclusive ? 2 : (d.gaborIn ? 1 : 0);
    out += fmt17(d.theta);
    out += ',';
    out += std::isinf(d.gammaG) ? "inf" : fmt17(d.gammaG);
    out += ',';
    out += std::isinf(d.sStar) ? "inf" : fmt17(d.sStar);
    out += ',';
    out += std::to_string(flag);
    out += '\n';
  }
  return out;
}

std::string signalCSV(const SampledSignal& u) {
  std::string out = "# x, re, im\n";
  for (int j = 0; j < u.grid.N; ++j) {
    out += fmt17(u.grid.x(j));
    out += ',';
    out += fmt17(u.u[j].real());
    out += ',';
    out += fmt17(u.u[j].imag());
    out += '\n';
  }
  return out;
}

}  // namespace gmla
