#ifndef FINGAP_HEUN_MAP_HPP
#define FINGAP_HEUN_MAP_HPP

#include <array>
#include <utility>
#include <vector>

#include "fingap/monodromy.hpp"

namespace fingap {

/// Parameters of the Heun equation
///   f'' + (gamma/w + delta/(w-1) + epsilon/(w-t)) f' + (alpha beta w - q) / (w (w-1) (w-t)) f = 0
/// obtained from the elliptic form by w = (e1 - e3) / (wp(x) - e3) and
/// f(x) = f~(w) w^((l0+1)/2) (w-1)^((l1+1)/2) (a w - 1)^((l2+1)/2).
struct HeunParams {
  cplx alpha, beta, gamma, delta, epsilon, q, t;
  /// (e2 - e3) / (e1 - e3); t = 1/a.
  cplx a;
  /// Constant in q = -(E/(e1 - e3) + c0) / (4a).
  cplx heun_shift_c0;
};

HeunParams ino_to_heun(const CouplingVector& l, cplx E, const EllipticContext& ctx);

struct InoPoint {
  CouplingVector l;
  cplx E;
};
/// Inverse map. l_i = -1 (gamma = 1/2 and so on) is returned as l_i = 0.
/// Throws DomainError when gamma, delta, epsilon or alpha - beta is off
/// 1/2 + Z, when gamma + delta + epsilon != alpha + beta + 1, or when t does
/// not match the lattice.
InoPoint heun_to_ino(const HeunParams& h, const EllipticContext& ctx);

/// The affine change E = 4 (e3 - e2) q - (e1 - e3) c0 and its inverse.
cplx heun_energy(cplx q, const CouplingVector& l, const EllipticContext& ctx);
cplx heun_accessory(cplx E, const CouplingVector& l, const EllipticContext& ctx);

/// w(x) = (e1 - e3) / (wp(x) - e3).
cplx heun_variable(cplx x, const EllipticContext& ctx);

/// Q~ and Q~1: Q(E) = (4(e3 - e2))^(2g+1) Q~(q(E)), Q1(E) = (4(e3 - e2))^g Q~1(q(E)).
std::pair<CPoly, CPoly> heun_curve(const SpectralCurve& curve, const CouplingVector& l, const EllipticContext& ctx);

/// Winding numbers of the image of x in [eps, 1 + eps] around w = 0, 1, 1/a,
/// from the summed argument increments over `samples` points.
std::array<int, 3> cycle_winding_numbers(cplx eps, const EllipticContext& ctx, int samples = 512);

struct CycleMonodromy {
  /// Diagonal of the monodromy along the cycle around w = 0 and w = 1; the
  /// second entry is the reciprocal of the first.
  std::array<cplx, 2> eigenvalues;
  cplx q_star;
  cplx E_star;
  /// Root of Q~ the integral starts from and the sign of the solution there.
  cplx q0;
  int sign0 = 1;
};

/// +-(-1)^(l0+l1) exp(+-sqrt(e3 - e2) int_{q0}^{q*} Q~1/sqrt(-Q~) dq), evaluated
/// as (-1)^(l0+l1) times the real-period multiplier at E(q*) and its inverse.
/// Throws DomainError when Q~(q*) = 0.
CycleMonodromy cycle_monodromy_eigenvalues(cplx q_star, const CouplingVector& l, const SpectralCurve& curve,
                                           const XiExpansion& xi, const EllipticContext& ctx);

}  // namespace fingap

#endif  // FINGAP_HEUN_MAP_HPP
