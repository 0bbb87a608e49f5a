#ifndef FINGAP_COMMUTING_OPERATOR_HPP
#define FINGAP_COMMUTING_OPERATOR_HPP

#include <vector>

#include "fingap/invariant_space.hpp"
#include "fingap/ode.hpp"
#include "fingap/spectral_curve.hpp"

namespace fingap {

/// A = sum_j (a_j d/dx - a_j'/2) H^(g-j), built from the E-slices of Xi.
/// Coefficients are returned in ascending powers of d/dx (index k for
/// (d/dx)^k, k = 0..2g+1).
VectorXc operator_coeffs(const XiExpansion& xi, cplx x, const EllipticContext& ctx);

/// Applies a differential operator with coefficients `c` at x to a jet of f.
cplx apply_operator(const VectorXc& c, const CJet& f);

/// A on an eigenfunction: Xi f' - Xi' f / 2, with f a solution at energy E.
cplx apply_A(const SolutionState& f, cplx E, const XiExpansion& xi, const EllipticContext& ctx);

/// Random solutions of (H - E) f = 0 at `trials` random energies, carried by
/// Taylor integration to a test point; returns the largest relative residual
/// of (H - E)(A f).
double verify_commutator(const XiExpansion& xi, const EllipticContext& ctx, int trials, unsigned seed = 1);

/// Largest relative residual of A(A f) + Q(E) f over random E and solutions f.
double algebraic_relation_check(const XiExpansion& xi, const SpectralCurve& curve, const EllipticContext& ctx,
                                int trials = 5, unsigned seed = 2);

/// Coefficients of the bordered determinant det[f_i^(r) | (d/dx)^r] over a
/// basis of V, expanded along the operator column (not normalized).
VectorXc determinant_operator_coeffs(const InvariantBasis& basis, cplx x, const EllipticContext& ctx);

struct DeterminantComparison {
  /// Largest relative coefficient difference after scaling the determinant
  /// so its leading coefficient is (-1)^g.
  double max_difference = 0;
  /// Leading coefficient of the determinant divided by (-1)^g at the first
  /// sample; the determinant equals this constant times A.
  cplx scale;
  /// Relative spread of that constant across the samples.
  double scale_spread = 0;
  /// Largest |coefficient of (d/dx)^(2g)| relative to the largest coefficient,
  /// on both sides.
  double subleading = 0;
  int samples = 0;
  bool proven_case = false;
};

/// Compares the determinant with A at six regular points. Outside the case of
/// exactly two zero couplings a DomainError is raised unless
/// `conjecture_mode` is set, in which case the numbers are only reported.
DeterminantComparison compare_determinant_formula(const XiExpansion& xi, const EllipticContext& ctx,
                                                  bool conjecture_mode = false);

/// Largest |A f_k(x)| over a basis of V and regular sample points x, relative
/// to the sum of the magnitudes of the terms c_r f_k^(r) forming it.
double invariant_space_annihilation(const XiExpansion& xi, const EllipticContext& ctx);

}  // namespace fingap

#endif  // FINGAP_COMMUTING_OPERATOR_HPP
