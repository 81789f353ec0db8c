#include "gmla/symbol_expr.hpp"

#include <cmath>
#include <limits>

namespace gmla {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool isZeroConst(const SymPtr& e) {
  return e->kind == SymbolKind::Const && e->cval == Complex(0.0, 0.0);
}
// Smooth step built from the polynomial-exponential bump f(t) = exp(-1/t):
// S(t) = f(t) / (f(t) + f(1-t)); identically 0 for t <= 0, 1 for t >= 1.
double bumpStep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double f = std::exp(-1.0 / t);
  double g = std::exp(-1.0 / (1.0 - t));
  return f / (f + g);
}

Jet2 bumpStepJet(const Jet2& t) {
  double tv = t.value();
  int q = t.order();
  if (tv <= 0.0) return Jet2::constant(0.0, q);
  if (tv >= 1.0) return Jet2::constant(1.0, q);
  Jet2 one = Jet2::constant(1.0, q);
  Jet2 f = (t.recip() * -1.0).exp();
  Jet2 g = ((one - t).recip() * -1.0).exp();
  return f * (f + g).recip();
}

double logistic(double s) { return 1.0 / (1.0 + std::exp(-s)); }

Jet2 logisticJet(const Jet2& s) {
  Jet2 e = (s * -1.0).exp();
  return (e + 1.0).recip();
}

}  // namespace

SymPtr symConst(Complex v) {
  auto n = std::make_shared<SymbolExpr>();
  n->kind = SymbolKind::Const;
  n->cval = v;
  return n;
}

SymPtr symX() {
  auto n = std::make_shared<SymbolExpr>();
  n->kind = SymbolKind::X;
  return n;
}

SymPtr symXi() {
  auto n = std::make_shared<SymbolExpr>();
  n->kind = SymbolKind::Xi;
  return n;
}

SymPtr symBracket(double m) {
  auto n = std::make_shared<SymbolExpr>();
  n->kind = SymbolKind::Bracket;
  n->m = m;
  return n;
}

SymPtr symGaussZ() {
  auto n = std::make_shared<SymbolExpr>();
  n->kind = SymbolKind::GaussZ;
  return n;
}

SymPtr coneCutoffSymbol(const Cone& cone, double wAngle, double wRadial) {
  double h = cone.halfWidth();
  if (!(wAngle > 0.0) || !(wRadial > 0.0))
    throw std::invalid_argument("coneCutoffSymbol: widths must be positive");
  if (wAngle >= h)
    throw std::invalid_argument(
        "coneCutoffSymbol: angular width must be smaller than the cone "
        "half-width");
  if (h >= kPi * (1.0 - 1e-9))
    throw std::invalid_argument(
        "coneCutoffSymbol: cones of angular width >= pi*2 - eps unsupported");
  auto n = std::make_shared<SymbolExpr>();
  n->kind = SymbolKind::ConeCutoff;
  n->cone.thetaLo = cone.thetaLo;
  n->cone.thetaHi = cone.thetaHi;
  n->cone.R = cone.R;
  n->cone.wAngle = wAngle;
  n->cone.wRadial = wRadial;
  n->cone.profile = ConeProfile::Bump;
  return n;
}

SymPtr coneSigmoidSymbol(const Cone& cone, double wRadial, double lambda) {
  double h = cone.halfWidth();
  if (!(wRadial > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("coneSigmoidSymbol: parameters must be > 0");
  if (h >= kPi * (1.0 - 1e-9))
    throw std::invalid_argument("coneSigmoidSymbol: half-width must be < pi");
  auto n = std::make_shared<SymbolExpr>();
  n->kind = SymbolKind::ConeCutoff;
  n->cone.thetaLo = cone.thetaLo;
  n->cone.thetaHi = cone.thetaHi;
  n->cone.R = cone.R;
  n->cone.wAngle = 0.0;
  n->cone.wRadial = wRadial;
  n->cone.profile = ConeProfile::Sigmoid;
  n->cone.lambda = lambda;
  return n;
}

SymPtr symSum(std::vector<SymPtr> kids) {
  std::vector<SymPtr> flat;
  Complex cacc(0.0, 0.0);
  bool sawConst = false;
  for (auto& k : kids) {
    if (k->kind == SymbolKind::Sum) {
      for (auto& kk : k->kids) flat.push_back(kk);
    } else if (k->kind == SymbolKind::Const) {
      cacc += k->cval;
      sawConst = true;
    } else {
      flat.push_back(k);
    }
  }
  if (sawConst && cacc != Complex(0.0, 0.0)) flat.push_back(symConst(cacc));
  if (flat.empty()) return symConst(0.0);
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<SymbolExpr>();
  n->kind = SymbolKind::Sum;
  n->kids = std::move(flat);
  return n;
}

SymPtr symProduct(std::vector<SymPtr> kids) {
  std::vector<SymPtr> flat;
  Complex cacc(1.0, 0.0);
  bool sawConst = false;
  for (auto& k : kids) {
    if (isZeroConst(k)) return symConst(0.0);
    if (k->kind == SymbolKind::Product) {
      for (auto& kk : k->kids) {
        if (kk->kind == SymbolKind::Const) {
          cacc *= kk->cval;
          sawConst = true;
        } else {
          flat.push_back(kk);
        }
      }
    } else if (k->kind == SymbolKind::Const) {
      cacc *= k->cval;
      sawConst = true;
    } else {
      flat.push_back(k);
    }
  }
  if (sawConst && cacc == Complex(0.0, 0.0)) return symConst(0.0);
  if (sawConst && cacc != Complex(1.0, 0.0))
    flat.insert(flat.begin(), symConst(cacc));
  if (flat.empty()) return symConst(1.0);
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<SymbolExpr>();
  n->kind = SymbolKind::Product;
  n->kids = std::move(flat);
  return n;
}

SymPtr symPower(SymPtr base, int k) {
  if (k == 0) return symConst(1.0);
  if (k == 1) return base;
  auto n = std::make_shared<SymbolExpr>();
  n->kind = SymbolKind::Power;
  n->ipow = k;
  n->kids = {std::move(base)};
  return n;
}

SymPtr symDeriv(SymPtr base, int ax, int axi) {
  if (ax < 0 || axi < 0)
    throw std::invalid_argument("symDeriv: orders must be >= 0");
  if (ax == 0 && axi == 0) return base;
  auto n = std::make_shared<SymbolExpr>();
  n->kind = SymbolKind::Deriv;
  n->ax = ax;
  n->axi = axi;
  n->kids = {std::move(base)};
  return n;
}

double declaredOrder(const SymPtr& e) {
  switch (e->kind) {
    case SymbolKind::Const:
      return (e->cval == Complex(0.0, 0.0)) ? kNegInf : 0.0;
    case SymbolKind::X:
    case SymbolKind::Xi:
      return 1.0;
    case SymbolKind::Bracket:
      return e->m;
    case SymbolKind::GaussZ:
      return kNegInf;
    case SymbolKind::ConeCutoff:
      return 0.0;
    case SymbolKind::Sum: {
      double m = kNegInf;
      for (const auto& k : e->kids) m = std::max(m, declaredOrder(k));
      return m;
    }
    case SymbolKind::Product: {
      double m = 0.0;
      for (const auto& k : e->kids) m += declaredOrder(k);
      return m;
    }
    case SymbolKind::Power:
      return e->ipow * declaredOrder(e->kids[0]);
    case SymbolKind::Deriv:
      return declaredOrder(e->kids[0]) - e->ax - e->axi;
  }
  return 0.0;
}

bool isPolynomial(const SymPtr& e) {
  switch (e->kind) {
    case SymbolKind::Const:
    case SymbolKind::X:
    case SymbolKind::Xi:
      return true;
    case SymbolKind::Bracket: {
      double m = e->m;
      return m >= 0.0 && std::fmod(m, 2.0) == 0.0;
    }
    case SymbolKind::Sum:
    case SymbolKind::Product: {
      for (const auto& k : e->kids)
        if (!isPolynomial(k)) return false;
      return true;
    }
    case SymbolKind::Power:
      return e->ipow >= 0 && isPolynomial(e->kids[0]);
    default:
      return false;
  }
}

int polyDegree(const SymPtr& e) {
  switch (e->kind) {
    case SymbolKind::Const:
      return 0;
    case SymbolKind::X:
    case SymbolKind::Xi:
      return 1;
    case SymbolKind::Bracket:
      return static_cast<int>(e->m);
    case SymbolKind::Sum: {
      int d = 0;
      for (const auto& k : e->kids) d = std::max(d, polyDegree(k));
      return d;
    }
    case SymbolKind::Product: {
      int d = 0;
      for (const auto& k : e->kids) d += polyDegree(k);
      return d;
    }
    case SymbolKind::Power:
      return e->ipow * polyDegree(e->kids[0]);
    default:
      throw std::domain_error("polyDegree: not a polynomial expression");
  }
}

SymPtr derivative(const SymPtr& e, int var) {
  if (var != 0 && var != 1)
    throw std::invalid_argument("derivative: var must be 0 (x) or 1 (xi)");
  SymPtr& cache = (var == 0) ? e->dxCache : e->dxiCache;
  if (cache) return cache;

  SymPtr result;
  switch (e->kind) {
    case SymbolKind::Const:
      result = symConst(0.0);
      break;
    case SymbolKind::X:
      result = symConst(var == 0 ? 1.0 : 0.0);
      break;
    case SymbolKind::Xi:
      result = symConst(var == 1 ? 1.0 : 0.0);
      break;
    case SymbolKind::Bracket:
      // d/dx <z>^m = m x <z>^(m-2)
      result = symProduct({symConst(e->m), var == 0 ? symX() : symXi(),
                           symBracket(e->m - 2.0)});
      break;
    case SymbolKind::GaussZ:
      result = symProduct(
          {symConst(-2.0), var == 0 ? symX() : symXi(), symGaussZ()});
      break;
    case SymbolKind::ConeCutoff:
      result = symDeriv(e, var == 0 ? 1 : 0, var == 1 ? 1 : 0);
      break;
    case SymbolKind::Sum: {
      std::vector<SymPtr> kids;
      for (const auto& k : e->kids) kids.push_back(derivative(k, var));
      result = symSum(std::move(kids));
      break;
    }
    case SymbolKind::Product: {
      std::vector<SymPtr> terms;
      for (size_t i = 0; i < e->kids.size(); ++i) {
        std::vector<SymPtr> fac = e->kids;
        fac[i] = derivative(e->kids[i], var);
        terms.push_back(symProduct(std::move(fac)));
      }
      result = symSum(std::move(terms));
      break;
    }
    case SymbolKind::Power: {
      result = symProduct({symConst(Complex(e->ipow, 0.0)),
                           symPower(e->kids[0], e->ipow - 1),
                           derivative(e->kids[0], var)});
      break;
    }
    case SymbolKind::Deriv: {
      result = symDeriv(e->kids[0], e->ax + (var == 0 ? 1 : 0),
                        e->axi + (var == 1 ? 1 : 0));
      break;
    }
  }
  cache = result;
  return result;
}

SymPtr derivativeAlpha(const SymPtr& e, int ax, int axi) {
  SymPtr r = e;
  for (int i = 0; i < ax; ++i) r = derivative(r, 0);
  for (int i = 0; i < axi; ++i) r = derivative(r, 1);
  return r;
}

namespace {

double coneCutoffScalar(const ConeCutoffParams& p, double x, double xi) {
  double r = std::hypot(x, xi);
  if (r <= p.R) return 0.0;
  double rho = bumpStep((r - p.R) / p.wRadial);
  if (rho == 0.0) return 0.0;
  double thetaC = 0.5 * (p.thetaLo + p.thetaHi);
  double h = 0.5 * (p.thetaHi - p.thetaLo);
  double c = (x * std::cos(thetaC) + xi * std::sin(thetaC)) / r;
  double beta;
  if (p.profile == ConeProfile::Bump) {
    double cEdge = std::cos(h);
    double cIn = std::cos(std::max(h - p.wAngle, 0.0));
    beta = bumpStep((c - cEdge) / (cIn - cEdge));
  } else {
    beta = logistic(p.lambda * (c - std::cos(h)));
  }
  return rho * beta;
}

}  // namespace

Jet2 coneCutoffJet(const ConeCutoffParams& p, double x, double xi, int order) {
  double r = std::hypot(x, xi);
  if (r <= p.R) return Jet2::constant(0.0, order);

  Jet2 jx = Jet2::variableX(x, order);
  Jet2 jxi = Jet2::variableXi(xi, order);
  Jet2 jr = (jx * jx + jxi * jxi).sqrt();
  Jet2 rho = bumpStepJet((jr + (-p.R)) * (1.0 / p.wRadial));
  if (rho.value() == 0.0) return Jet2::constant(0.0, order);

  double thetaC = 0.5 * (p.thetaLo + p.thetaHi);
  double h = 0.5 * (p.thetaHi - p.thetaLo);
  Jet2 c = (jx * std::cos(thetaC) + jxi * std::sin(thetaC)) * jr.recip();
  Jet2 beta(order);
  if (p.profile == ConeProfile::Bump) {
    double cEdge = std::cos(h);
    double cIn = std::cos(std::max(h - p.wAngle, 0.0));
    beta = bumpStepJet((c + (-cEdge)) * (1.0 / (cIn - cEdge)));
  } else {
    beta = logisticJet((c + (-std::cos(h))) * p.lambda);
  }
  return rho * beta;
}

Complex evalSymbol(const SymPtr& e, double x, double xi) {
  switch (e->kind) {
    case SymbolKind::Const:
      return e->cval;
    case SymbolKind::X:
      return Complex(x, 0.0);
    case SymbolKind::Xi:
      return Complex(xi, 0.0);
    case SymbolKind::Bracket:
      return std::pow(1.0 + x * x + xi * xi, 0.5 * e->m);
    case SymbolKind::GaussZ:
      return std::exp(-(x * x + xi * xi));
    case SymbolKind::ConeCutoff:
      return coneCutoffScalar(e->cone, x, xi);
    case SymbolKind::Sum: {
      Complex s = 0.0;
      for (const auto& k : e->kids) s += evalSymbol(k, x, xi);
      return s;
    }
    case SymbolKind::Product: {
      Complex pr = 1.0;
      for (const auto& k : e->kids) {
        pr *= evalSymbol(k, x, xi);
        if (pr == Complex(0.0, 0.0)) return pr;
      }
      return pr;
    }
    case SymbolKind::Power: {
      Complex b = evalSymbol(e->kids[0], x, xi);
      int n = e->ipow;
      if (n < 0) {
        if (b == Complex(0.0, 0.0))
          throw std::domain_error(
              "evalSymbol: negative power of a vanishing base");
        b = Complex(1.0, 0.0) / b;
        n = -n;
      }
      Complex r = 1.0;
      for (int j = 0; j < n; ++j) r *= b;
      return r;
    }
    case SymbolKind::Deriv: {
      const auto& base = e->kids[0];
      if (base->kind != SymbolKind::ConeCutoff)
        throw std::logic_error("Deriv nodes wrap cone cutoffs only");
      Jet2 j = coneCutoffJet(base->cone, x, xi, e->ax + e->axi);
      return Complex(j.deriv(e->ax, e->axi), 0.0);
    }
  }
  throw std::logic_error("evalSymbol: unreachable");
}

Complex evalSymbolDeriv(const SymPtr& e, int ax, int axi, double x,
                        double xi) {
  return evalSymbol(derivativeAlpha(e, ax, axi), x, xi);
}

}  // namespace gmla
