#include "gmla/signal_expr.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gmla {

namespace {
SignalPtr node(SignalKind k) {
  auto n = std::make_shared<SignalExpr>();
  n->kind = k;
  return n;
}
}  // namespace

SignalPtr sigConst(Complex v) {
  auto n = std::make_shared<SignalExpr>();
  n->kind = SignalKind::Const;
  n->cval = v;
  return n;
}

SignalPtr sigGauss(double x0, double xi0) {
  auto n = std::make_shared<SignalExpr>();
  n->kind = SignalKind::Gauss;
  n->p0 = x0;
  n->p1 = xi0;
  return n;
}

SignalPtr sigChirp(double c) {
  auto n = std::make_shared<SignalExpr>();
  n->kind = SignalKind::Chirp;
  n->p0 = c;
  return n;
}

SignalPtr sigPlanewave(double xi0) {
  auto n = std::make_shared<SignalExpr>();
  n->kind = SignalKind::Planewave;
  n->p0 = xi0;
  return n;
}

SignalPtr sigDeltaApprox(double eps) {
  if (!(eps > 0.0))
    throw std::invalid_argument("deltaApprox: eps must be positive");
  auto n = std::make_shared<SignalExpr>();
  n->kind = SignalKind::DeltaApprox;
  n->p0 = eps;
  return n;
}

SignalPtr sigDirac() { return node(SignalKind::Dirac); }

SignalPtr sigHermite(int k) {
  if (k < 0) throw std::invalid_argument("hermite: index must be >= 0");
  auto n = std::make_shared<SignalExpr>();
  n->kind = SignalKind::Hermite;
  n->k = k;
  return n;
}

SignalPtr sigFile(const std::string& path) {
  auto n = std::make_shared<SignalExpr>();
  n->kind = SignalKind::File;
  n->path = path;
  return n;
}

SignalPtr sigSum(std::vector<SignalPtr> kids) {
  if (kids.empty()) return sigConst(0.0);
  if (kids.size() == 1) return kids[0];
  auto n = std::make_shared<SignalExpr>();
  n->kind = SignalKind::Sum;
  n->kids = std::move(kids);
  return n;
}

SignalPtr sigProduct(std::vector<SignalPtr> kids) {
  if (kids.empty()) return sigConst(1.0);
  if (kids.size() == 1) return kids[0];
  auto n = std::make_shared<SignalExpr>();
  n->kind = SignalKind::Product;
  n->kids = std::move(kids);
  return n;
}

SignalPtr sigPower(SignalPtr base, int k) {
  auto n = std::make_shared<SignalExpr>();
  n->kind = SignalKind::Power;
  n->k = k;
  n->kids = {std::move(base)};
  return n;
}

double hermiteFunction(int k, double y) {
  // Physicists' Hermite polynomial recurrence with the L2 normalization
  // folded in at the end.
  double h0 = 1.0, h1 = 2.0 * y;
  double h = (k == 0) ? h0 : h1;
  for (int j = 2; j <= k; ++j) {
    double hj = 2.0 * y * h1 - 2.0 * (j - 1) * h0;
    h0 = h1;
    h1 = hj;
    h = hj;
  }
  double norm = std::pow(kPi, -0.25);
  for (int j = 1; j <= k; ++j) norm /= std::sqrt(2.0 * j);
  return norm * h * std::exp(-0.5 * y * y);
}

Complex evalSignal(const SignalPtr& e, double x) {
  switch (e->kind) {
    case SignalKind::Const:
      return e->cval;
    case SignalKind::Gauss: {
      double d = x - e->p0;
      return std::pow(kPi, -0.25) * std::exp(-0.5 * d * d) *
             std::exp(Complex(0.0, x * e->p1));
    }
    case SignalKind::Chirp:
      return std::exp(Complex(0.0, 0.5 * e->p0 * x * x));
    case SignalKind::Planewave:
      return std::exp(Complex(0.0, x * e->p0));
    case SignalKind::DeltaApprox: {
      double eps = e->p0;
      return std::exp(-0.5 * x * x / (eps * eps)) /
             (eps * std::sqrt(kTwoPi));
    }
    case SignalKind::Hermite:
      return hermiteFunction(e->k, x);
    case SignalKind::Dirac:
      throw std::domain_error(
          "dirac() has no pointwise values; use grid sampling");
    case SignalKind::File:
      throw std::domain_error(
          "file() signals support grid sampling only");
    case SignalKind::Sum: {
      Complex s = 0.0;
      for (const auto& k : e->kids) s += evalSignal(k, x);
      return s;
    }
    case SignalKind::Product: {
      Complex p = 1.0;
      for (const auto& k : e->kids) p *= evalSignal(k, x);
      return p;
    }
    case SignalKind::Power: {
      Complex b = evalSignal(e->kids[0], x);
      int n = e->k;
      if (n < 0) return std::pow(Complex(1.0, 0.0) / b, -n);
      Complex r = 1.0;
      for (int j = 0; j < n; ++j) r *= b;
      return r;
    }
  }
  throw std::logic_error("evalSignal: unreachable");
}

bool hasNonDecayingFactor(const SignalPtr& e) {
  if (e->kind == SignalKind::Planewave || e->kind == SignalKind::Chirp)
    return true;
  for (const auto& k : e->kids)
    if (hasNonDecayingFactor(k)) return true;
  return false;
}

namespace {

std::vector<Complex> sampleVec(const SignalPtr& e, const PhaseGrid& g) {
  const int N = g.N;
  std::vector<Complex> v(N);
  switch (e->kind) {
    case SignalKind::Dirac: {
      v.assign(N, Complex(0.0));
      v[g.originIndex()] = Complex(1.0 / g.hx, 0.0);
      return v;
    }
    case SignalKind::File: {
      std::ifstream in(e->path);
      if (!in)
        throw std::runtime_error("file(): cannot open '" + e->path + "'");
      std::string line;
      int row = 0;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (row >= N)
          throw std::runtime_error("file(): more rows than grid points (N=" +
                                   std::to_string(N) + ") in '" + e->path +
                                   "'");
        std::istringstream ss(line);
        double re = 0.0, im = 0.0;
        char comma;
        if (!(ss >> re))
          throw std::runtime_error("file(): bad row " + std::to_string(row) +
                                   " in '" + e->path + "'");
        if (ss >> comma) ss >> im;
        v[row++] = Complex(re, im);
      }
      if (row != N)
        throw std::runtime_error(
            "file(): row count " + std::to_string(row) +
            " does not match grid N=" + std::to_string(N));
      return v;
    }
    case SignalKind::Sum: {
      v.assign(N, Complex(0.0));
      for (const auto& k : e->kids) {
        auto kv = sampleVec(k, g);
        for (int j = 0; j < N; ++j) v[j] += kv[j];
      }
      return v;
    }
    case SignalKind::Product: {
      v.assign(N, Complex(1.0));
      for (const auto& k : e->kids) {
        auto kv = sampleVec(k, g);
        for (int j = 0; j < N; ++j) v[j] *= kv[j];
      }
      return v;
    }
    case SignalKind::Power: {
      auto bv = sampleVec(e->kids[0], g);
      for (int j = 0; j < N; ++j) {
        Complex b = bv[j];
        int n = e->k;
        Complex r = 1.0;
        if (n < 0) {
          b = Complex(1.0, 0.0) / b;
          n = -n;
        }
        for (int t = 0; t < n; ++t) r *= b;
        v[j] = r;
      }
      return v;
    }
    default: {
      for (int j = 0; j < N; ++j) v[j] = evalSignal(e, g.x(j));
      return v;
    }
  }
}

}  // namespace

SampledSignal sampleSignal(const SignalPtr& e, const PhaseGrid& g) {
  SampledSignal s;
  s.grid = g;
  s.u = sampleVec(e, g);
  const int N = g.N;
  int band = std::max(1, N / 20);  // outermost 5% on each side
  double boundaryMax = 0.0, interiorMax = 0.0;
  for (int j = 0; j < N; ++j) {
    double a = std::abs(s.u[j]);
    if (j < band || j >= N - band)
      boundaryMax = std::max(boundaryMax, a);
    else
      interiorMax = std::max(interiorMax, a);
  }
  s.boundaryRatio = interiorMax > 0.0 ? boundaryMax / interiorMax : 0.0;
  s.boundaryWarning =
      !hasNonDecayingFactor(e) && s.boundaryRatio > 1e-8;
  return s;
}

double l2Norm(const SampledSignal& s) {
  double acc = 0.0;
  for (const auto& z : s.u) acc += std::norm(z);
  return std::sqrt(acc * s.grid.hx);
}

}  // namespace gmla
