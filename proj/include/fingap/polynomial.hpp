#ifndef FINGAP_POLYNOMIAL_HPP
#define FINGAP_POLYNOMIAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fingap/types.hpp"

namespace fingap {

/// Dense univariate polynomial with coefficients stored in ascending order,
/// c[0] + c[1] E + ... + c[n] E^n.
template <typename Scalar>
class Polynomial {
 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Real = typename Eigen::NumTraits<Scalar>::Real;

  Polynomial() : c_(Coeffs::Zero(1)) {}
  explicit Polynomial(Coeffs c) : c_(std::move(c)) {
    if (c_.size() == 0) c_ = Coeffs::Zero(1);
  }
  Polynomial(std::initializer_list<Scalar> c) : c_(static_cast<Eigen::Index>(c.size())) {
    Eigen::Index i = 0;
    for (const auto& v : c) c_(i++) = v;
    if (c_.size() == 0) c_ = Coeffs::Zero(1);
  }

  static Polynomial constant(Scalar v) { return Polynomial(Coeffs::Constant(1, v)); }
  static Polynomial monomial(int n, Scalar v = Scalar(1)) {
    Coeffs c = Coeffs::Zero(n + 1);
    c(n) = v;
    return Polynomial(c);
  }
  /// Monic polynomial with the given roots.
  template <typename Range>
  static Polynomial from_roots(const Range& roots) {
    Polynomial p = constant(Scalar(1));
    for (const auto& r : roots) p = p * Polynomial{-Scalar(r), Scalar(1)};
    return p;
  }

  const Coeffs& coeffs() const { return c_; }
  Scalar operator[](Eigen::Index k) const { return k < c_.size() ? c_(k) : Scalar(0); }
  Eigen::Index size() const { return c_.size(); }

  /// Formal degree (index of the last stored coefficient).
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Scalar leading() const { return c_(c_.size() - 1); }

  /// Drops trailing coefficients with |c| <= tol * max|c|.
  Polynomial trimmed(Real tol = Real(0)) const {
    Real big = c_.cwiseAbs().maxCoeff();
    Eigen::Index n = c_.size();
    while (n > 1 && std::abs(c_(n - 1)) <= tol * big) --n;
    return Polynomial(Coeffs(c_.head(n)));
  }

  Scalar operator()(Scalar x) const {
    Scalar acc = c_(c_.size() - 1);
    for (Eigen::Index k = c_.size() - 2; k >= 0; --k) acc = acc * x + c_(k);
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial();
    Coeffs d(c_.size() - 1);
    for (Eigen::Index k = 1; k < c_.size(); ++k) d(k - 1) = Real(k) * c_(k);
    return Polynomial(d);
  }

  Polynomial monic() const { return Polynomial(Coeffs(c_ / leading())); }

  /// Quotient of division by (E - r); the remainder is discarded.
  Polynomial deflate(Scalar r) const {
    const Eigen::Index n = c_.size() - 1;
    if (n <= 0) return Polynomial();
    Coeffs q(n);
    Scalar acc = c_(n);
    for (Eigen::Index k = n - 1; k >= 0; --k) {
      q(k) = acc;
      acc = acc * r + c_(k);
    }
    return Polynomial(q);
  }

  /// p(a*t + b) as a polynomial in t.
  Polynomial compose_affine(Scalar a, Scalar b) const {
    Polynomial lin{b, a};
    Polynomial acc = constant(c_(c_.size() - 1));
    for (Eigen::Index k = c_.size() - 2; k >= 0; --k) acc = acc * lin + constant(c_(k));
    return acc;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Coeffs c = Coeffs::Zero(std::max(a.size(), b.size()));
    c.head(a.size()) += a.c_;
    c.head(b.size()) += b.c_;
    return Polynomial(c);
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    Coeffs c = Coeffs::Zero(std::max(a.size(), b.size()));
    c.head(a.size()) += a.c_;
    c.head(b.size()) -= b.c_;
    return Polynomial(c);
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Coeffs c = Coeffs::Zero(a.size() + b.size() - 1);
    for (Eigen::Index i = 0; i < a.size(); ++i)
      for (Eigen::Index j = 0; j < b.size(); ++j) c(i + j) += a.c_(i) * b.c_(j);
    return Polynomial(c);
  }
  friend Polynomial operator*(Scalar s, const Polynomial& a) { return Polynomial(Coeffs(s * a.c_)); }

 private:
  Coeffs c_;
};

using CPoly = Polynomial<cplx>;

/// Roots of p via companion-matrix eigenvalues, each polished by Newton steps.
inline std::vector<cplx> polynomial_roots(const CPoly& p_in) {
  CPoly p = p_in.trimmed();
  const int n = p.degree();
  std::vector<cplx> roots;
  if (n < 1) return roots;
  CPoly m = p.monic();
  MatrixXc comp = MatrixXc::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -m[i];
  Eigen::ComplexEigenSolver<MatrixXc> es(comp, false);
  CPoly dm = m.derivative();
  for (int i = 0; i < n; ++i) {
    cplx r = es.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      cplx d = dm(r);
      if (std::abs(d) == 0.0) break;
      cplx step = m(r) / d;
      if (!std::isfinite(std::abs(step))) break;
      r -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(r))) break;
    }
    roots.push_back(r);
  }
  return roots;
}

/// Relative difference of two coefficient vectors after rescaling E = s*T,
/// max_k |a_k - b_k| s^k / max_k |b_k| s^k. With s ~ root magnitude this is
/// insensitive to the wide dynamic range of raw monomial coefficients.
inline double scaled_coefficient_difference(const CPoly& a, const CPoly& b, double s) {
  const Eigen::Index n = std::max(a.size(), b.size());
  double num = 0.0, den = 0.0, sk = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    num = std::max(num, std::abs(a[k] - b[k]) * sk);
    den = std::max(den, std::abs(b[k]) * sk);
    sk *= s;
  }
  return den > 0.0 ? num / den : num;
}

/// Cauchy-type root scale of a polynomial: max_k |c_k / c_n|^(1 / (n - k)).
inline double root_scale(const CPoly& p) {
  const int n = p.degree();
  if (n <= 0) return 1.0;
  const double lead = std::abs(p.leading());
  double r = 0.0;
  for (int k = 0; k < n; ++k) r = std::max(r, std::pow(std::abs(p[k]) / lead, 1.0 / (n - k)));
  return r > 0.0 ? r : 1.0;
}

/// Coefficient difference of a against b, with E measured in units of the
/// root scale of b.
inline double relative_coefficient_error(const CPoly& a, const CPoly& b) {
  return scaled_coefficient_difference(a, b, root_scale(b));
}

/// Hausdorff distance between two finite point sets in the complex plane.
inline double hausdorff_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  auto one_side = [](const std::vector<cplx>& x, const std::vector<cplx>& y) {
    double worst = 0.0;
    for (const auto& p : x) {
      double best = INFINITY;
      for (const auto& q : y) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_side(a, b), one_side(b, a));
}

}  // namespace fingap

#endif  // FINGAP_POLYNOMIAL_HPP
