#include "fingap/spectral_curve.hpp"

#include <algorithm>

#include "fingap/quadrature.hpp"

namespace fingap {

CPoly compute_Q(const XiExpansion& xi, const EllipticContext& ctx, double* spread) {
  int first = 0;
  while (xi.coupling[first] == 0) ++first;
  CPoly q = curve_polynomial_at_pole(xi, first, ctx);
  if (std::abs(q.leading() - 1.0) > 1e-8)
    throw NumericalError("compute_Q: leading coefficient deviates from 1 by " +
                         std::to_string(std::abs(q.leading() - 1.0)));
  VectorXc c = q.coeffs();
  c(c.size() - 1) = 1.0;
  q = CPoly(c);

  double worst = 0;
  for (cplx x : quiet_sample_points(xi.coupling, 8, ctx)) {
    const auto p = xi_polynomials_at(xi, x, ctx);
    const cplx u = potential(xi.coupling, x, ctx);
    const CPoly qx = p[0] * p[0] * CPoly{-u, 1.0} + cplx(0.5) * (p[0] * p[2]) - cplx(0.25) * (p[1] * p[1]);
    worst = std::max(worst, relative_coefficient_error(qx, q));
  }
  if (spread) *spread = worst;
  if (worst > 1e-6)
    throw NumericalError("compute_Q: Q varies with x by " + std::to_string(worst) + " (relative); Xi is inaccurate");
  return q;
}

std::vector<cplx> wp_power_periods(int kmax, int m, int n, const EllipticContext& ctx) {
  std::vector<cplx> I(std::max(kmax, 1) + 1, 0.0);
  I[0] = double(m) + double(n) * ctx.tau();
  I[1] = -2.0 * (double(m) * ctx.eta1() + double(n) * ctx.eta3());
  for (int k = 1; k + 1 <= kmax; ++k) {
    const double dk = k;
    cplx num = (dk * dk - 0.5 * dk) * ctx.g2() * I[k - 1];
    if (k >= 2) num += dk * (dk - 1.0) * ctx.g3() * I[k - 2];
    I[k + 1] = num / (4.0 * dk * dk + 2.0 * dk);
  }
  I.resize(kmax + 1);
  return I;
}

CPoly period_integral(const XiExpansion& xi, int m, int n, const EllipticContext& ctx) {
  int kmax = 0;
  for (const auto& t : xi.terms) kmax = std::max(kmax, t.power);
  const auto I = wp_power_periods(kmax, m, n, ctx);
  VectorXc c = VectorXc::Zero(xi.g + 1);
  for (size_t t = 0; t < xi.terms.size(); ++t)
    c += I[xi.terms[t].power] * xi.coeffs.row(static_cast<Eigen::Index>(t)).transpose();
  return CPoly(c);
}

CPoly compute_Q1(const XiExpansion& xi, const EllipticContext& ctx, Q1Method method) {
  if (method == Q1Method::termwise) return period_integral(xi, 1, 0, ctx);
  const double clearance = 0.05;
  cplx eps = ctx.tau() / 4.0;
  auto clear = [&](cplx e) {
    // the potential's poles sit on the rows Im x = 0 and Im x = Im(tau)/2 (mod Im tau)
    const double h = ctx.tau().imag();
    const double y = std::fmod(std::fmod(e.imag(), 0.5 * h) + 0.5 * h, 0.5 * h);
    return std::min(y, 0.5 * h - y) >= clearance;
  };
  if (!clear(eps)) eps += 0.06 * ctx.tau();
  if (!clear(eps)) throw DomainError("compute_Q1: integration path passes within 0.05 of a pole");
  VectorXc c(xi.g + 1);
  for (int j = 0; j <= xi.g; ++j) {
    const VectorXc sc = xi.slice_coeffs(j);
    c(xi.g - j) = integrate_segment([&](cplx x) { return ansatz_jet(xi, sc, x, 0, ctx).value(); }, eps, eps + 1.0,
                                    1e-13);
  }
  return CPoly(c);
}

SpectralCurve compute_spectral_curve(const XiExpansion& xi, const EllipticContext& ctx) {
  SpectralCurve sc;
  sc.genus = xi.g;
  sc.Q = compute_Q(xi, ctx, &sc.x_spread);
  sc.Q1 = compute_Q1(xi, ctx);
  sc.roots = polynomial_roots(sc.Q);
  std::sort(sc.roots.begin(), sc.roots.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  sc.min_root_gap = INFINITY;
  for (size_t i = 0; i < sc.roots.size(); ++i)
    for (size_t j = i + 1; j < sc.roots.size(); ++j)
      sc.min_root_gap = std::min(sc.min_root_gap, std::abs(sc.roots[i] - sc.roots[j]) / ctx.energy_scale());
  sc.clustered = sc.min_root_gap < 1e-5;
  return sc;
}

}  // namespace fingap
