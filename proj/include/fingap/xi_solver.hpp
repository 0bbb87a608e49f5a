#ifndef FINGAP_XI_SOLVER_HPP
#define FINGAP_XI_SOLVER_HPP

#include <functional>
#include <vector>

#include "fingap/coupling.hpp"
#include "fingap/polynomial.hpp"

namespace fingap {

/// Xi(x, E) = c0(E) + sum_i sum_j b_ij(E) wp(x + w_i)^(l_i - j), stored as a
/// coefficient table over the ansatz functions {1} and {wp(x + w_i)^k}.
struct XiExpansion {
  struct Term {
    int half_period = 0;  // i
    int power = 0;        // k; power 0 is the constant function
  };

  CouplingVector coupling;
  cplx tau;
  int g = 0;
  std::vector<Term> terms;
  /// coeffs(t, e): coefficient of E^e multiplying terms[t].
  MatrixXc coeffs;
  /// Singular-value gap that isolated the solution.
  double kernel_gap = 0;

  CPoly c0() const;
  /// b^{(i)}_j, the polynomial multiplying wp(x + w_i)^(l_i - j).
  CPoly b(int i, int j) const;
  /// a_j(x) coefficients over the ansatz, with Xi = sum_j a_j E^(g-j).
  VectorXc slice_coeffs(int j) const;
};

enum class XiMethod {
  /// Integrate a_(j+1)' = -L0 a_j / 4 in Laurent form and solve for the
  /// integration constants that close the recursion.
  recursion,
  /// Least squares over quasi-random regular points.
  collocation,
};

struct XiOptions {
  XiMethod method = XiMethod::recursion;
  /// Offset into the quasi-random collocation sequence.
  unsigned seed = 0;
  /// Maximum number of genus corrections before giving up.
  int max_retries = 6;
};

/// Doubly periodic solution of the product equation, normalized so c0 is monic.
XiExpansion compute_xi(const CouplingVector& l, const EllipticContext& ctx, const XiOptions& opt = {});

/// Constant Laurent coefficient of Xi^2 (E - u) + Xi Xi''/2 - Xi'^2/4 at a
/// half period where the potential has a pole.
CPoly curve_polynomial_at_pole(const XiExpansion& xi, int half_period, const EllipticContext& ctx);

/// Taylor jet of a combination of ansatz functions at x.
CJet ansatz_jet(const XiExpansion& xi, const VectorXc& c, cplx x, int order, const EllipticContext& ctx);

using SliceFn = std::function<CJet(cplx x, int order)>;
/// a_0, ..., a_g as jet-valued functions of x; a_0 is identically 1.
std::vector<SliceFn> xi_slices(const XiExpansion& xi, const EllipticContext& ctx);

/// Jet in x of Xi(., E) at x.
CJet xi_jet(const XiExpansion& xi, cplx x, cplx E, int order, const EllipticContext& ctx);
cplx xi_value(const XiExpansion& xi, cplx x, cplx E, const EllipticContext& ctx);
/// Xi(x, .) as a polynomial in E.
CPoly xi_polynomial_at(const XiExpansion& xi, cplx x, const EllipticContext& ctx);
/// The same together with its first two x-derivatives.
std::array<CPoly, 3> xi_polynomials_at(const XiExpansion& xi, cplx x, const EllipticContext& ctx);

/// h''' - 4 (u - E) h' - 2 u' h for h given by its jet (order >= 3) at x.
cplx product_ode_residual(const std::function<CJet(cplx x, int order)>& h, cplx x, cplx E,
                          const CouplingVector& l, const EllipticContext& ctx);

}  // namespace fingap

#endif  // FINGAP_XI_SOLVER_HPP
