#pragma once

#include <string>

#include <json.hpp>

#include "gmla/operators.hpp"
#include "gmla/stft.hpp"
#include "gmla/symbol_calculus.hpp"
#include "gmla/wavefront.hpp"

namespace gmla {

using json = nlohmann::ordered_json;

// Top-level JSON report written by every CLI command. Determinism contract:
// identical configs yield byte-identical "config", "payload" and "warnings";
// "timing_ms" is excluded from the comparison.
struct ReportEnvelope {
  std::string schemaVersion = "1";
  std::string command;
  json config = json::object();
  json payload = json::object();
  std::vector<std::string> warnings;
  double timingMs = 0.0;

  json toJson() const;
  // The deterministic portion (everything except timing), serialized.
  std::string payloadBytes() const;
};

// Writes via a temporary file in the same directory plus rename, so a
// crash never leaves a partially written report.
void atomicWrite(const std::string& path, const std::string& content);

// A double with 17 significant digits (lossless round-trip).
std::string fmt17(double v);

json toJson(const PhaseGrid& g);
json toJson(const PhaseField& f);  // full field, base-10 floats
json toJson(const SeminormTable& t);
json toJson(const CharSetEstimate& c);
json toJson(const MicrosupportEstimate& m);
json toJson(const ParametrixResult& p);
json toJson(const QNormReport& q);
json toJson(const QBoundednessReport& q);
json toJson(const WavefrontEstimate& e);
json toJson(const InclusionReport& r);
json toJson(const FilterReport& r);

// CSV emitters, gnuplot-consumable, one documented header line each.
std::string heatmapCSV(const PhaseField& f);   // x, xi, |V|
std::string fieldCSV(const PhaseField& f);     // x, xi, re, im
std::string polarCSV(const WavefrontEstimate& e);  // theta, gamma_G, s*, flag
std::string signalCSV(const SampledSignal& u);     // x, re, im

}  // namespace gmla
