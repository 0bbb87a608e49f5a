#ifndef FINGAP_MONODROMY_HPP
#define FINGAP_MONODROMY_HPP

#include <optional>
#include <vector>

#include "fingap/spectral_curve.hpp"

namespace fingap {

/// Lattice element P = m + n tau.
struct LatticePeriod {
  int m = 1;
  int n = 0;
  cplx value(const EllipticContext& ctx) const { return double(m) + double(n) * ctx.tau(); }
  bool is_zero() const { return m == 0 && n == 0; }
};

enum class MonodromyMethod { direct, hyperelliptic };

/// Multiplier B in Lambda(x + P, E*) = B Lambda(x, E*) for
/// Lambda(x, E) = sqrt(Xi) exp(int sqrt(-Q(E)) / Xi dx).
struct MonodromyResult {
  cplx E_star;
  cplx multiplier;
  /// Branch of sqrt(-Q(E*)) the multiplier refers to.
  cplx sqrt_minus_Q;
  cplx base_point;
  int base_sign = 1;
  LatticePeriod period;
  MonodromyMethod method = MonodromyMethod::direct;
  /// x-plane segment ends (direct) or E-plane polyline (hyperelliptic).
  std::vector<cplx> path;
};

/// Start of the x-path for period P: tau/4 for real periods, (1 + tau)/4
/// otherwise. Attempts 1, 2, 3, ... move it by +0.06, -0.06, +0.12, ... times
/// tau (real periods) or 1 (other periods).
cplx x_path_start(const CouplingVector& l, LatticePeriod P, const EllipticContext& ctx, int attempt = 0);

/// B by quadrature of sqrt(-Q)/Xi over the x-segment, times the continuation
/// sign of sqrt(Xi). `branch` fixes sqrt(-Q(E)); the principal root is used
/// otherwise. Throws DomainError when Q(E) = 0 or every path start of
/// attempts 0..6 leaves a zero of Xi within 0.03 or a pole within 0.05 (both
/// scaled by min(1, Im tau)).
MonodromyResult direct_multiplier(cplx E, const XiExpansion& xi, const SpectralCurve& curve, const EllipticContext& ctx,
                                  LatticePeriod P = {}, std::optional<cplx> branch = std::nullopt);

/// +1 or -1: sqrt(Xi(x, E0)) continued from eps to eps + P.
int base_sign_at_root(cplx E0, const XiExpansion& xi, const SpectralCurve& curve, const EllipticContext& ctx,
                      LatticePeriod P = {});

/// Integral of num(E)/sqrt(-Q(E)) from a root E0 of Q to E1. The path is a
/// polyline in s = sqrt(E - E0) that keeps the other roots at E-distance
/// `clearance` (shrunk near the end points); sqrt(-Q) starts as
/// s sqrt(-Q'(E0)) and is continued along it.
struct AbelianIntegral {
  cplx value;
  /// sqrt(-Q(E1)) on the continued branch.
  cplx sqrt_end;
  std::vector<cplx> waypoints;  // E-plane
};
AbelianIntegral abelian_integral(const CPoly& num, const CPoly& Q, cplx E0, cplx E1, double clearance);

/// sign0 exp(-1/2 int_{E0}^{E*} I_P(E)/sqrt(-Q(E)) dE), I_P the period
/// integral of Xi over P.
MonodromyResult hyperelliptic_multiplier(cplx E_star, cplx E0, int sign0, const SpectralCurve& curve,
                                         const XiExpansion& xi, const EllipticContext& ctx, LatticePeriod P = {});

/// B at another root Ek of Q, continued from (E0, sign0): the integral is split
/// at a point between the two roots so both end singularities are removed by
/// the square-root substitution. The result should be +-1.
MonodromyResult root_multiplier(cplx Ek, cplx E0, int sign0, const SpectralCurve& curve, const XiExpansion& xi,
                                const EllipticContext& ctx, LatticePeriod P = {});

/// Root of Q nearest to `near`.
cplx nearest_root(const SpectralCurve& curve, cplx near);

}  // namespace fingap

#endif  // FINGAP_MONODROMY_HPP
