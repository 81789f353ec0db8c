#include "gmla/operators.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "gmla/fft.hpp"
#include "gmla/symbol_calculus.hpp"

namespace gmla {

OperatorRep weylQuantize(const SymPtr& a, const PhaseGrid& grid) {
  const int N = grid.N;
  // The xi integral uses the grid's own DFT frequencies (no oversampling):
  // exact discrete Fourier inversion makes a = 1 the exact identity.
  const double dxi = kTwoPi / (N * grid.hx);

  OperatorRep op;
  op.grid = grid;
  op.symbolText = prettyPrint(a);
  op.quantization = "weyl";
  op.order = declaredOrder(a);
  op.mat = Eigen::MatrixXcd::Zero(N, N);

  // Entries on the anti-diagonal j + k = s share the midpoint
  // m_s = (x_j + x_k) / 2 and are one inverse DFT of the symbol row:
  //   M[j][k] = (-1)^(j-k) F_s[(j - k) mod N] / N,
  //   F_s[t]  = sum_q a(m_s, xi_q) exp(2 pi i t q / N).
  parallelFor(2 * N - 1, [&](int s) {
    double m = -grid.L + 0.5 * s * grid.hx;
    std::vector<Complex> row(N);
    for (int q = 0; q < N; ++q) row[q] = evalSymbol(a, m, (q - N / 2) * dxi);
    fftInPlace(row, +1);
    int jLo = std::max(0, s - N + 1), jHi = std::min(N - 1, s);
    for (int j = jLo; j <= jHi; ++j) {
      int k = s - j;
      int t = ((j - k) % N + N) % N;
      double sign = ((j - k) % 2 == 0) ? 1.0 : -1.0;
      op.mat(j, k) = sign * row[t] / static_cast<double>(N);
    }
  });
  return op;
}

SampledSignal applyOperator(const OperatorRep& op, const SampledSignal& u) {
  if (!op.grid.sameSignalAxis(u.grid))
    throw std::invalid_argument("applyOperator: grid mismatch");
  SampledSignal r;
  r.grid = u.grid;
  r.u.resize(u.u.size());
  Eigen::Map<const Eigen::VectorXcd> uv(u.u.data(), u.u.size());
  Eigen::Map<Eigen::VectorXcd> rv(r.u.data(), r.u.size());
  rv = op.mat * uv;
  return r;
}

SampledSignal antiWickApply(const SymPtr& a, const SampledSignal& u) {
  Window w = makeWindow(u.grid, "gaussian");
  PhaseField F = stft(u, w);
  for (int j = 0; j < F.grid.N; ++j)
    for (int k = 0; k < F.grid.nFreq; ++k)
      F.at(j, k) *= evalSymbol(a, F.grid.x(j), F.grid.xi(k));
  SampledSignal r = stftAdjoint(F, w);
  for (auto& v : r.u) v /= kTwoPi;
  return r;
}

double operatorNormEstimate(const Eigen::MatrixXcd& m, int iters) {
  std::mt19937 rng(42);
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::VectorXcd v(m.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(nd(rng), nd(rng));
  v.normalize();
  double sigma2 = 0.0;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXcd w = m.adjoint() * (m * v);
    sigma2 = std::real(v.dot(w));
    double n = w.norm();
    if (n == 0.0) return 0.0;
    v = w / n;
  }
  return std::sqrt(std::max(0.0, sigma2));
}

QNormMethod parseQNormMethod(const std::string& name) {
  if (name == "stft-weighted") return QNormMethod::StftWeighted;
  if (name == "locop") return QNormMethod::LocOp;
  if (name == "weyl-elliptic") return QNormMethod::WeylElliptic;
  throw std::invalid_argument("unknown qnorm method: " + name);
}

std::string qNormMethodName(QNormMethod m) {
  switch (m) {
    case QNormMethod::StftWeighted:
      return "stft-weighted";
    case QNormMethod::LocOp:
      return "locop";
    case QNormMethod::WeylElliptic:
      return "weyl-elliptic";
  }
  return "?";
}

QNormReport qNorm(const SampledSignal& u, double s, QNormMethod method,
                  const Window& w) {
  if (!u.grid.sameSignalAxis(w.grid))
    throw std::invalid_argument("qNorm: grid mismatch");
  QNormReport rep;
  rep.s = s;
  rep.method = method;
  rep.windowDesc = w.desc;
  switch (method) {
    case QNormMethod::StftWeighted: {
      PhaseField F = stft(u, w);
      double acc = 0.0;
      for (int j = 0; j < F.grid.N; ++j)
        for (int k = 0; k < F.grid.nFreq; ++k) {
          double x = F.grid.x(j), xi = F.grid.xi(k);
          double wgt = std::pow(1.0 + x * x + xi * xi, s);
          acc += wgt * std::norm(F.at(j, k));
        }
      rep.value = std::sqrt(acc * F.grid.hx * F.grid.dxi);
      break;
    }
    case QNormMethod::LocOp:
      rep.value = l2Norm(antiWickApply(symBracket(s), u));
      break;
    case QNormMethod::WeylElliptic:
      rep.value =
          l2Norm(applyOperator(weylQuantize(symBracket(s), u.grid), u));
      break;
  }
  return rep;
}

QBoundednessReport qBoundednessCheck(const SymPtr& a, double m, double s,
                                     const std::vector<SignalPtr>& testSet,
                                     const PhaseGrid& grid) {
  QBoundednessReport rep;
  rep.s = s;
  rep.m = m;
  auto supRatio = [&](const PhaseGrid& g) {
    OperatorRep op = weylQuantize(a, g);
    Window w = makeWindow(g, "gaussian");
    double worst = 0.0;
    for (const auto& e : testSet) {
      SampledSignal u = sampleSignal(e, g);
      double den = qNorm(u, s, QNormMethod::StftWeighted, w).value;
      double num = qNorm(applyOperator(op, u), s - m,
                         QNormMethod::StftWeighted, w)
                       .value;
      if (den > 0.0) worst = std::max(worst, num / den);
    }
    return worst;
  };
  rep.ratio = supRatio(grid);
  rep.ratioRefined =
      supRatio(PhaseGrid::make(grid.d, grid.L, 2 * grid.N, grid.oversample));
  rep.change = rep.ratio > 0.0
                   ? std::abs(rep.ratioRefined - rep.ratio) / rep.ratio
                   : 0.0;
  rep.pass = std::isfinite(rep.ratio) && std::isfinite(rep.ratioRefined) &&
             rep.change < 0.20;
  return rep;
}

}  // namespace gmla
