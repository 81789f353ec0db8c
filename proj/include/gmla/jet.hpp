#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gmla {

// Truncated bivariate Taylor expansion ("2-jet") in the phase variables
// (x, xi) about a point, carried to a fixed total degree. Arithmetic on jets
// propagates Taylor coefficients exactly (up to rounding), which yields exact
// mixed partial derivatives of any smooth closed-form composition. Used to
// evaluate derivatives of cone cutoffs, which have no convenient closed-form
// derivative expressions.
class Jet2 {
 public:
  // Triangular storage: coefficient of dx^i dxi^j at index off(i+j) + j.
  explicit Jet2(int order) : order_(order), c_(size(order), 0.0) {
    if (order < 0 || order > 24)
      throw std::invalid_argument("Jet2: order out of range");
  }

  static Jet2 constant(double v, int order) {
    Jet2 r(order);
    r.c_[0] = v;
    return r;
  }
  // Jet of the coordinate function x (resp. xi) at base point v.
  static Jet2 variableX(double v, int order) {
    Jet2 r(order);
    r.c_[0] = v;
    if (order >= 1) r.at(1, 0) = 1.0;
    return r;
  }
  static Jet2 variableXi(double v, int order) {
    Jet2 r(order);
    r.c_[0] = v;
    if (order >= 1) r.at(0, 1) = 1.0;
    return r;
  }

  int order() const { return order_; }
  double value() const { return c_[0]; }

  double coeff(int i, int j) const {
    if (i < 0 || j < 0 || i + j > order_) return 0.0;
    return c_[idx(i, j)];
  }
  double& at(int i, int j) { return c_[idx(i, j)]; }

  // Partial derivative value d^i_x d^j_xi f = coeff * i! * j!.
  double deriv(int i, int j) const {
    return coeff(i, j) * factorial(i) * factorial(j);
  }

  Jet2 operator+(const Jet2& o) const {
    Jet2 r(order_);
    for (size_t k = 0; k < c_.size(); ++k) r.c_[k] = c_[k] + o.c_[k];
    return r;
  }
  Jet2 operator-(const Jet2& o) const {
    Jet2 r(order_);
    for (size_t k = 0; k < c_.size(); ++k) r.c_[k] = c_[k] - o.c_[k];
    return r;
  }
  Jet2 operator*(double s) const {
    Jet2 r(order_);
    for (size_t k = 0; k < c_.size(); ++k) r.c_[k] = c_[k] * s;
    return r;
  }
  Jet2 operator+(double s) const {
    Jet2 r = *this;
    r.c_[0] += s;
    return r;
  }

  Jet2 operator*(const Jet2& o) const {
    Jet2 r(order_);
    for (int t1 = 0; t1 <= order_; ++t1)
      for (int j1 = 0; j1 <= t1; ++j1) {
        double a = c_[off(t1) + j1];
        if (a == 0.0) continue;
        int i1 = t1 - j1;
        for (int t2 = 0; t2 + t1 <= order_; ++t2)
          for (int j2 = 0; j2 <= t2; ++j2) {
            double b = o.c_[off(t2) + j2];
            if (b == 0.0) continue;
            int i2 = t2 - j2;
            r.c_[idx(i1 + i2, j1 + j2)] += a * b;
          }
      }
    return r;
  }

  // Composition with a univariate analytic function given by the Taylor
  // coefficients f_n = f^(n)(value()) / n!. Horner evaluation in the
  // nilpotent part.
  Jet2 composeUnivariate(const std::vector<double>& f) const {
    Jet2 hat = *this;
    hat.c_[0] = 0.0;
    Jet2 r = Jet2::constant(f[order_], order_);
    for (int n = order_ - 1; n >= 0; --n) r = r * hat + f[n];
    return r;
  }

  Jet2 exp() const {
    double v = std::exp(value());
    std::vector<double> f(order_ + 1);
    double fact = 1.0;
    for (int n = 0; n <= order_; ++n) {
      if (n > 0) fact *= n;
      f[n] = v / fact;
    }
    return composeUnivariate(f);
  }

  // Real power, base value must be positive.
  Jet2 pow(double p) const {
    double v = value();
    if (v <= 0.0)
      throw std::domain_error("Jet2::pow: base must be positive");
    std::vector<double> f(order_ + 1);
    double coef = std::pow(v, p);  // binom(p, n) * v^(p-n)
    for (int n = 0; n <= order_; ++n) {
      f[n] = coef;
      coef *= (p - n) / (n + 1) / v;
    }
    return composeUnivariate(f);
  }

  Jet2 sqrt() const { return pow(0.5); }
  Jet2 recip() const { return pow(-1.0); }

  static double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
  }

 private:
  static int off(int t) { return t * (t + 1) / 2; }
  static int size(int order) { return off(order + 1); }
  int idx(int i, int j) const {
    if (i < 0 || j < 0 || i + j > order_)
      throw std::out_of_range("Jet2: index out of range");
    return off(i + j) + j;
  }

  int order_;
  std::vector<double> c_;
};

inline Jet2 operator*(double s, const Jet2& j) { return j * s; }

}  // namespace gmla
