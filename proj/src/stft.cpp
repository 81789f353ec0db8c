#include "gmla/stft.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gmla/fft.hpp"

namespace gmla {

double PhaseField::maxAbs() const {
  double m = 0.0;
  for (const auto& z : V) m = std::max(m, std::abs(z));
  return m;
}

Window makeWindow(const PhaseGrid& grid, const std::string& spec) {
  Window w;
  w.grid = grid;
  w.desc = spec;
  w.psi.resize(grid.N);
  if (spec == "gaussian") {
    for (int j = 0; j < grid.N; ++j) {
      double y = grid.x(j);
      w.psi[j] = std::pow(kPi, -0.25) * std::exp(-0.5 * y * y);
    }
  } else if (spec.rfind("hermite(", 0) == 0 && spec.back() == ')') {
    int k = std::stoi(spec.substr(8, spec.size() - 9));
    if (k < 0) throw std::invalid_argument("makeWindow: hermite index < 0");
    for (int j = 0; j < grid.N; ++j)
      w.psi[j] = hermiteFunction(k, grid.x(j));
  } else {
    throw std::invalid_argument("makeWindow: unknown window spec '" + spec +
                                "' (use gaussian or hermite(k))");
  }
  double n2 = 0.0;
  for (double v : w.psi) n2 += v * v;
  n2 = std::sqrt(n2 * grid.hx);
  if (n2 <= 0.0) throw std::runtime_error("makeWindow: zero window");
  for (double& v : w.psi) v /= n2;
  return w;
}

PhaseField stft(const SampledSignal& u, const Window& w) {
  const PhaseGrid& g = u.grid;
  if (!g.sameSignalAxis(w.grid))
    throw std::invalid_argument("stft: window grid mismatch");
  const int N = g.N;
  const int Nq = g.nFreq;
  PhaseField F;
  F.grid = g;
  F.windowDesc = w.desc;
  F.V.assign(static_cast<size_t>(N) * Nq, Complex(0.0));

  // Phase bookkeeping for the centered axes: with y_n = (n - N/2) hx and
  // xi_k = (k - Nq/2) dxi,
  //   V[j][k] = hx phase0 P_k FFT[ (-1)^n u_n psi((n-j+N/2) mod N) ](k),
  // phase0 = exp(-i pi N / 2), P_k = exp(i pi N k / Nq).
  const Complex phase0 = std::exp(Complex(0.0, -kPi * N / 2.0));
  std::vector<Complex> Pk(Nq);
  for (int k = 0; k < Nq; ++k)
    Pk[k] = std::exp(Complex(0.0, kPi * N * k / Nq));

  parallelFor(N, [&](int j) {
    std::vector<Complex> buf(Nq, Complex(0.0));
    for (int n = 0; n < N; ++n) {
      int widx = n - j + N / 2;
      widx %= N;
      if (widx < 0) widx += N;
      Complex gval = u.u[n] * w.psi[widx];
      buf[n] = (n & 1) ? -gval : gval;
    }
    fftInPlace(buf, -1);
    for (int k = 0; k < Nq; ++k)
      F.V[static_cast<size_t>(j) * Nq + k] = g.hx * phase0 * Pk[k] * buf[k];
  });
  return F;
}

SampledSignal stftAdjoint(const PhaseField& F, const Window& w) {
  const PhaseGrid& g = F.grid;
  if (!g.sameSignalAxis(w.grid))
    throw std::invalid_argument("stftAdjoint: window grid mismatch");
  const int N = g.N;
  const int Nq = g.nFreq;
  const Complex phase0c = std::exp(Complex(0.0, kPi * N / 2.0));
  std::vector<Complex> Pkc(Nq);
  for (int k = 0; k < Nq; ++k)
    Pkc[k] = std::exp(Complex(0.0, -kPi * N * k / Nq));

  // G_j[n] = sum_k F[j][k] exp(+i y_n xi_k); then
  // (V* F)_n = hx dxi sum_j psi((n-j+N/2) mod N) G_j[n].
  // Deterministic reduction: compute rows in parallel, accumulate serially.
  std::vector<Complex> acc(N, Complex(0.0));
  std::vector<std::vector<Complex>> rows(N);
  parallelFor(N, [&](int j) {
    std::vector<Complex> buf(Nq);
    for (int k = 0; k < Nq; ++k)
      buf[k] = F.V[static_cast<size_t>(j) * Nq + k] * Pkc[k];
    fftInPlace(buf, +1);
    std::vector<Complex> row(N);
    for (int n = 0; n < N; ++n) {
      Complex v = phase0c * buf[n];
      row[n] = (n & 1) ? -v : v;
    }
    rows[j] = std::move(row);
  });
  for (int j = 0; j < N; ++j) {
    for (int n = 0; n < N; ++n) {
      int widx = n - j + N / 2;
      widx %= N;
      if (widx < 0) widx += N;
      acc[n] += w.psi[widx] * rows[j][n];
    }
  }
  SampledSignal out;
  out.grid = g;
  out.u.resize(N);
  double scale = g.hx * g.dxi;
  for (int n = 0; n < N; ++n) out.u[n] = scale * acc[n];
  return out;
}

double moyalResidual(const SampledSignal& u, const Window& w) {
  PhaseField F = stft(u, w);
  SampledSignal rec = stftAdjoint(F, w);
  double nr = 0.0, nu = 0.0;
  for (int n = 0; n < u.grid.N; ++n) {
    Complex d = rec.u[n] / kTwoPi - u.u[n];
    nr += std::norm(d);
    nu += std::norm(u.u[n]);
  }
  if (nu == 0.0) throw std::invalid_argument("moyalResidual: zero signal");
  return std::sqrt(nr / nu);
}

bool closedFormSupported(const SignalPtr& e) {
  switch (e->kind) {
    case SignalKind::Gauss:
    case SignalKind::Planewave:
    case SignalKind::Chirp:
    case SignalKind::Dirac:
    case SignalKind::DeltaApprox:
    case SignalKind::Hermite:
      return true;
    case SignalKind::Const:
    case SignalKind::File:
    case SignalKind::Power:
      return false;
    case SignalKind::Sum: {
      for (const auto& k : e->kids)
        if (!closedFormSupported(k)) return false;
      return true;
    }
    case SignalKind::Product: {
      // Scalars times exactly one supported factor.
      int nonConst = 0;
      for (const auto& k : e->kids) {
        if (k->kind == SignalKind::Const) continue;
        if (!closedFormSupported(k)) return false;
        ++nonConst;
      }
      return nonConst <= 1;
    }
  }
  return false;
}

namespace {

Complex closedFormPrimitive(const SignalPtr& e, double x, double xi) {
  const double pi14 = std::pow(kPi, -0.25);
  switch (e->kind) {
    case SignalKind::Gauss: {
      double x0 = e->p0, xi0 = e->p1;
      Complex q(x0 + x, xi0 - xi);
      return std::exp(q * q / 4.0 - Complex(0.5 * (x0 * x0 + x * x), 0.0));
    }
    case SignalKind::Planewave: {
      double d = xi - e->p0;
      return pi14 * std::sqrt(kTwoPi) *
             std::exp(Complex(-0.5 * d * d, -x * d));
    }
    case SignalKind::Chirp: {
      Complex den(1.0, -e->p0);
      Complex q(x, -xi);
      return pi14 * std::sqrt(kTwoPi / den) *
             std::exp(q * q / (2.0 * den) - Complex(0.5 * x * x, 0.0));
    }
    case SignalKind::Dirac:
      return pi14 * std::exp(-0.5 * x * x);
    case SignalKind::DeltaApprox: {
      double eps = e->p0;
      double a = 0.5 + 0.5 / (eps * eps);
      Complex b(x, -xi);
      return pi14 / (eps * std::sqrt(kTwoPi)) * std::sqrt(kPi / a) *
             std::exp(b * b / (4.0 * a) - Complex(0.5 * x * x, 0.0));
    }
    case SignalKind::Hermite: {
      int k = e->k;
      Complex q(x, -xi);
      double norm = 1.0;
      for (int j = 1; j <= k; ++j) norm *= 2.0 * j;
      Complex p = 1.0;
      for (int j = 0; j < k; ++j) p *= q;
      return p / std::sqrt(norm) *
             std::exp(q * q / 4.0 - Complex(0.5 * x * x, 0.0));
    }
    default:
      throw std::domain_error(
          "closedFormSTFT: expression outside the closed-form class");
  }
}

}  // namespace

Complex closedFormSTFT(const SignalPtr& e, double x, double xi) {
  switch (e->kind) {
    case SignalKind::Sum: {
      Complex s = 0.0;
      for (const auto& k : e->kids) s += closedFormSTFT(k, x, xi);
      return s;
    }
    case SignalKind::Product: {
      Complex scale = 1.0;
      SignalPtr main;
      for (const auto& k : e->kids) {
        if (k->kind == SignalKind::Const) {
          scale *= k->cval;
        } else if (!main) {
          main = k;
        } else {
          throw std::domain_error(
              "closedFormSTFT: products of non-scalar factors unsupported");
        }
      }
      if (!main) return scale * Complex(0.0);  // pure scalar has no STFT here
      return scale * closedFormSTFT(main, x, xi);
    }
    default:
      return closedFormPrimitive(e, x, xi);
  }
}

PhaseGrid makeSelfDualGrid(int N) {
  // hx == dxi requires N hx^2 = 2 pi.
  double hx = std::sqrt(kTwoPi / N);
  return PhaseGrid::make(1, 0.5 * N * hx, N, 1);
}

SampledSignal fourierTransform(const SampledSignal& u) {
  const PhaseGrid& g = u.grid;
  if (g.oversample != 1)
    throw std::invalid_argument("fourierTransform: oversample must be 1");
  if (std::abs(g.hx - g.dxi) > 1e-9 * g.hx)
    throw std::invalid_argument(
        "fourierTransform: requires a self-dual grid (hx == dxi)");
  const int N = g.N;
  const Complex phase0 = std::exp(Complex(0.0, -kPi * N / 2.0));
  std::vector<Complex> buf(N);
  for (int n = 0; n < N; ++n) buf[n] = (n & 1) ? -u.u[n] : u.u[n];
  fftInPlace(buf, -1);
  SampledSignal out;
  out.grid = g;
  out.u.resize(N);
  for (int k = 0; k < N; ++k) {
    Complex pk = std::exp(Complex(0.0, kPi * static_cast<double>(N) * k / N));
    out.u[k] = g.hx * phase0 * pk * buf[k];
  }
  return out;
}

}  // namespace gmla
