#ifndef FINGAP_INVARIANT_SPACE_HPP
#define FINGAP_INVARIANT_SPACE_HPP

#include <array>
#include <vector>

#include "fingap/coupling.hpp"
#include "fingap/polynomial.hpp"

namespace fingap {

/// wp_1^b1 wp_2^b2 wp_3^b3 wp^n.
struct BasisElement {
  std::array<int, 3> beta{};
  int n = 0;
};

/// One summand U_alpha of V. Functions in the block pick up the signs
/// (eps1, eps3) under x -> x + 1 and x -> x + tau.
struct InvariantBlock {
  std::array<int, 4> alpha{};
  std::array<int, 4> beta{};
  int eps1 = 1;
  int eps3 = 1;
  std::vector<BasisElement> elements;
};

struct InvariantBasis {
  CouplingVector coupling;
  std::vector<InvariantBlock> blocks;
  int dim = 0;
};

/// Dimension of V from the sorted couplings k0 >= k1 >= k2 >= k3.
int invariant_dimension(const CouplingVector& l);

/// Direct sum of the four U blocks. Elements within a block are ordered by
/// ascending power of wp; the characteristic polynomial does not depend on it.
InvariantBasis build_invariant_space(const CouplingVector& l);

CJet basis_jet(const BasisElement& f, cplx x, int order, const EllipticContext& ctx);
cplx basis_value(const BasisElement& f, cplx x, const EllipticContext& ctx);

struct HamiltonianAction {
  MatrixXc matrix;      // H f_j = sum_i M(i, j) f_i
  double residual = 0;  // max_j |H f_j - sum_i M_ij f_i|_inf / |f_j|_inf on a test grid
  double condition = 0; // worst column-scaled collocation condition number
};

/// Matrix of H = -d^2/dx^2 + u on V by least-squares collocation, block by
/// block. Throws NumericalError if a collocation system has condition number
/// above 1e12 or the off-sample residual exceeds 1e-8.
HamiltonianAction hamiltonian_matrix(const InvariantBasis& basis, const EllipticContext& ctx);

/// Monic characteristic polynomial det(E - M).
CPoly characteristic_polynomial(const MatrixXc& m);

}  // namespace fingap

#endif  // FINGAP_INVARIANT_SPACE_HPP
