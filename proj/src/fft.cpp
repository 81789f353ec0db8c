#include "gmla/fft.hpp"

#include <fftw3.h>

#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace gmla {

namespace {

std::mutex planMutex;
std::map<std::pair<int, int>, fftw_plan>& planCache() {
  static std::map<std::pair<int, int>, fftw_plan> cache;
  return cache;
}

fftw_plan planFor(int n, int sign) {
  std::lock_guard<std::mutex> lock(planMutex);
  auto key = std::make_pair(n, sign);
  auto it = planCache().find(key);
  if (it != planCache().end()) return it->second;
  // Plan on a scratch buffer; FFTW_UNALIGNED lets the plan execute on any
  // caller-provided array. FFTW_ESTIMATE keeps planning deterministic.
  std::vector<std::complex<double>> scratch(n);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft_1d(
      n, p, p, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan) throw std::runtime_error("fft: planning failed");
  planCache()[key] = plan;
  return plan;
}

}  // namespace

void fftInPlace(std::vector<std::complex<double>>& data, int sign) {
  fftw_plan plan = planFor(static_cast<int>(data.size()), sign);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

int effectiveThreadCount() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("GMLA_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v < static_cast<long>(hw)) hw = static_cast<unsigned>(v);
    if (v >= 1 && v >= static_cast<long>(hw)) hw = static_cast<unsigned>(v);
  }
  return static_cast<int>(hw);
}

void parallelFor(int n, const std::function<void(int)>& fn) {
  int nt = std::min(effectiveThreadCount(), n);
  if (nt <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    workers.emplace_back([=, &fn] {
      for (int i = t; i < n; i += nt) fn(i);
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace gmla
