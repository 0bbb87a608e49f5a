#ifndef FINGAP_ELLIPTIC_HPP
#define FINGAP_ELLIPTIC_HPP

#include <array>
#include <vector>

#include "fingap/jet.hpp"
#include "fingap/types.hpp"

namespace fingap {

/// Period lattice Z + tau Z together with every constant the Weierstrass
/// family needs. Half periods follow w0 = 0, w1 = 1/2, w2 = -(tau+1)/2,
/// w3 = tau/2 and e_i = wp(w_i). Immutable once built; all evaluators below
/// are pure functions of (z, ctx).
class EllipticContext {
 public:
  cplx tau() const { return tau_; }
  /// Nome p = exp(pi i tau).
  cplx nome() const { return p_; }
  cplx half_period(int i) const { return omega_[i]; }
  /// e_i for i in {1, 2, 3}.
  cplx e(int i) const { return e_[i - 1]; }
  cplx eta1() const { return eta1_; }
  /// zeta(tau/2); fixed by Legendre's relation eta3 = tau*eta1 - pi i.
  cplx eta3() const { return eta3_; }
  /// zeta(w_i) for i in {1, 2, 3}.
  cplx eta(int i) const;
  cplx g2() const { return g2_; }
  cplx g3() const { return g3_; }
  int trunc_order() const { return order_; }
  /// max(1, |e_1|, |e_2|, |e_3|); the natural magnitude of energies.
  double energy_scale() const;

  /// theta_k(0) for k in {1,2,3,4} (theta_1(0) = 0).
  cplx theta_zero(int k) const { return theta0_[k - 1]; }
  /// theta_1'(0).
  cplx theta1_prime_zero() const { return theta1p0_; }

  friend EllipticContext make_context(cplx tau, int trunc_order);

 private:
  cplx tau_, p_;
  std::array<cplx, 4> omega_{};
  std::array<cplx, 3> e_{};
  cplx eta1_, eta3_, g2_, g3_;
  std::array<cplx, 4> theta0_{};
  cplx theta1p0_;
  int order_ = 64;
};

/// Builds the context for periods (1, tau). Throws DomainError for
/// Im tau <= 0 or trunc_order < 8 and NumericalError when the q-series at
/// orders N and N+4 disagree by more than 1e-12 (relative).
EllipticContext make_context(cplx tau, int trunc_order = 64);
/// Doubles the truncation order starting from 64 until two successive orders
/// agree to 1e-12.
EllipticContext make_context_adaptive(cplx tau);

/// Lattice reduction z = z0 + m + n tau with |Im z0| <= Im(tau)/2 and
/// |Re(z0 - (Im z0/Im tau) tau)| <= 1/2.
struct ReducedPoint {
  cplx z0;
  int m = 0;
  int n = 0;
};
ReducedPoint reduce(cplx z, const EllipticContext& ctx);
/// Distance from z to the nearest lattice point.
double lattice_distance(cplx z, const EllipticContext& ctx);

cplx wp(cplx z, const EllipticContext& ctx);
cplx wp_prime(cplx z, const EllipticContext& ctx);
cplx wp_second(cplx z, const EllipticContext& ctx);
cplx zeta_w(cplx z, const EllipticContext& ctx);
cplx sigma_w(cplx z, const EllipticContext& ctx);
/// Co-sigma sigma_i(z) = exp(-eta_i z) sigma(z + w_i) / sigma(w_i), i in {1,2,3}.
cplx co_sigma(int i, cplx z, const EllipticContext& ctx);
/// Co-wp wp_i(z) = sigma_i(z) / sigma(z); wp_i(z)^2 = wp(z) - e_i.
cplx co_wp(int i, cplx z, const EllipticContext& ctx);

/// Jacobi theta functions theta_k(v | tau), k in {1,2,3,4}, nome p = exp(pi i tau):
///   theta_1(v) = 2 sum_{n>=0} (-1)^n p^{(n+1/2)^2} sin((2n+1) v),
///   theta_2(v) = 2 sum_{n>=0} p^{(n+1/2)^2} cos((2n+1) v),
///   theta_3(v) = 1 + 2 sum_{n>=1} p^{n^2} cos(2 n v),
///   theta_4(v) = 1 + 2 sum_{n>=1} (-1)^n p^{n^2} cos(2 n v),
/// where p^{(n+1/2)^2} means exp(pi i tau (n+1/2)^2). With this convention
/// sigma(z) = exp(eta1 z^2) theta_1(pi z) / (pi theta_1'(0)).
cplx theta(int k, cplx v, const EllipticContext& ctx);

/// Taylor jets around z0 (order = number of derivatives kept).
CJet wp_jet(cplx z0, int order, const EllipticContext& ctx);
/// y^2 wp(y) as a Taylor series in y (the Laurent expansion of wp at 0).
CJet wp_square_jet(int order, const EllipticContext& ctx);
/// Jets of (wp_1, wp_2, wp_3) around z0.
std::array<CJet, 3> co_wp_jets(cplx z0, int order, const EllipticContext& ctx);

}  // namespace fingap

#endif  // FINGAP_ELLIPTIC_HPP
