#ifndef FINGAP_JET_HPP
#define FINGAP_JET_HPP

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "fingap/types.hpp"

namespace fingap {

/// Truncated Taylor expansion f(z0 + t) = sum_{k<=order} a_k t^k of an
/// analytic function around a fixed base point. Arithmetic follows the usual
/// power-series rules, so derivatives of composite expressions are exact up
/// to the truncation order.
template <typename Scalar>
class Jet {
 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Jet() = default;
  explicit Jet(Coeffs a) : a_(std::move(a)) {}

  static Jet constant(Scalar v, int order) {
    Coeffs a = Coeffs::Zero(order + 1);
    a(0) = v;
    return Jet(a);
  }
  static Jet zero(int order) { return Jet(Coeffs::Zero(order + 1)); }
  /// The identity z0 + t.
  static Jet variable(Scalar z0, int order) {
    Coeffs a = Coeffs::Zero(order + 1);
    a(0) = z0;
    if (order >= 1) a(1) = Scalar(1);
    return Jet(a);
  }

  int order() const { return static_cast<int>(a_.size()) - 1; }
  const Coeffs& coeffs() const { return a_; }
  Coeffs& coeffs() { return a_; }
  Scalar operator[](int k) const { return k <= order() ? a_(k) : Scalar(0); }

  Scalar value() const { return a_(0); }
  /// k-th derivative at the base point.
  Scalar deriv(int k) const {
    if (k > order()) return Scalar(0);
    double fact = 1.0;
    for (int j = 2; j <= k; ++j) fact *= j;
    return fact * a_(k);
  }

  /// Jet of f' (one order lower).
  Jet derivative() const {
    if (order() == 0) return zero(0);
    Coeffs d(order());
    for (int k = 1; k <= order(); ++k) d(k - 1) = double(k) * a_(k);
    return Jet(d);
  }

  Jet truncated(int order) const { return Jet(Coeffs(a_.head(std::min(order, this->order()) + 1))); }

  /// Value of the truncated series at offset t from the base point.
  Scalar eval(Scalar t) const {
    Scalar acc = a_(order());
    for (int k = order() - 1; k >= 0; --k) acc = acc * t + a_(k);
    return acc;
  }

  Jet& operator+=(const Jet& o) { *this = *this + o; return *this; }
  Jet& operator-=(const Jet& o) { *this = *this - o; return *this; }
  Jet& operator*=(const Jet& o) { *this = *this * o; return *this; }

  friend Jet operator+(const Jet& x, const Jet& y) {
    const int n = std::min(x.order(), y.order());
    return Jet(Coeffs(x.a_.head(n + 1) + y.a_.head(n + 1)));
  }
  friend Jet operator-(const Jet& x, const Jet& y) {
    const int n = std::min(x.order(), y.order());
    return Jet(Coeffs(x.a_.head(n + 1) - y.a_.head(n + 1)));
  }
  friend Jet operator-(const Jet& x) { return Jet(Coeffs(-x.a_)); }
  friend Jet operator*(const Jet& x, const Jet& y) {
    const int n = std::min(x.order(), y.order());
    Coeffs c = Coeffs::Zero(n + 1);
    for (int k = 0; k <= n; ++k)
      for (int j = 0; j <= k; ++j) c(k) += x.a_(j) * y.a_(k - j);
    return Jet(c);
  }
  friend Jet operator/(const Jet& x, const Jet& y) {
    const int n = std::min(x.order(), y.order());
    if (y.a_(0) == Scalar(0)) throw DomainError("Jet division by a series vanishing at the base point");
    Coeffs c(n + 1);
    for (int k = 0; k <= n; ++k) {
      Scalar acc = x.a_(k);
      for (int j = 1; j <= k; ++j) acc -= y.a_(j) * c(k - j);
      c(k) = acc / y.a_(0);
    }
    return Jet(c);
  }
  friend Jet operator*(Scalar s, const Jet& x) { return Jet(Coeffs(s * x.a_)); }
  friend Jet operator*(const Jet& x, Scalar s) { return Jet(Coeffs(s * x.a_)); }
  friend Jet operator+(const Jet& x, Scalar s) {
    Jet r = x;
    r.a_(0) += s;
    return r;
  }
  friend Jet operator-(const Jet& x, Scalar s) { return x + (-s); }

 private:
  Coeffs a_;
};

using CJet = Jet<cplx>;

/// Integer power of a jet; negative exponents go through one reciprocal.
template <typename Scalar>
Jet<Scalar> pow(const Jet<Scalar>& x, int n) {
  const int order = x.order();
  if (n == 0) return Jet<Scalar>::constant(Scalar(1), order);
  Jet<Scalar> base = n > 0 ? x : Jet<Scalar>::constant(Scalar(1), order) / x;
  unsigned e = static_cast<unsigned>(n > 0 ? n : -n);
  Jet<Scalar> result = Jet<Scalar>::constant(Scalar(1), order);
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return result;
}

}  // namespace fingap

#endif  // FINGAP_JET_HPP
