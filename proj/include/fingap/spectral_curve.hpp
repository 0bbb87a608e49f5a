#ifndef FINGAP_SPECTRAL_CURVE_HPP
#define FINGAP_SPECTRAL_CURVE_HPP

#include <vector>

#include "fingap/xi_solver.hpp"

namespace fingap {

/// Hyperelliptic curve y^2 = -Q(E) attached to Xi.
struct SpectralCurve {
  CPoly Q;   // monic, degree 2g + 1
  CPoly Q1;  // monic, degree g
  std::vector<cplx> roots;
  int genus = 0;
  /// Largest relative disagreement of Q across the x samples.
  double x_spread = 0;
  /// Smallest distance between two roots, relative to the energy scale.
  double min_root_gap = 0;
  /// Set when two roots are closer than 1e-5 (singular curve suspected).
  bool clustered = false;
};

/// Q(E) = Xi^2 (E - u) + Xi Xi''/2 - (Xi')^2/4, read off the Laurent expansion
/// at a pole of u. The same expression evaluated at 8 regular x must agree to
/// 1e-6 (relative, at the root scale of Q); the worst disagreement is reported
/// through `spread`. Throws NumericalError on failure or if the leading
/// coefficient is off 1 by more than 1e-8.
CPoly compute_Q(const XiExpansion& xi, const EllipticContext& ctx, double* spread = nullptr);

enum class Q1Method { quadrature, termwise };

/// Q1(E) = integral of Xi(x, E) over x from tau/4 to 1 + tau/4.
CPoly compute_Q1(const XiExpansion& xi, const EllipticContext& ctx, Q1Method method = Q1Method::termwise);

/// Integrals of wp(x)^k along any path from z to z + m + n tau, k = 0..kmax.
std::vector<cplx> wp_power_periods(int kmax, int m, int n, const EllipticContext& ctx);

/// I_P(E) = integral of Xi(x, E) over x from eps to eps + m + n tau.
CPoly period_integral(const XiExpansion& xi, int m, int n, const EllipticContext& ctx);

SpectralCurve compute_spectral_curve(const XiExpansion& xi, const EllipticContext& ctx);

}  // namespace fingap

#endif  // FINGAP_SPECTRAL_CURVE_HPP
