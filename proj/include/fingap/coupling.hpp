#ifndef FINGAP_COUPLING_HPP
#define FINGAP_COUPLING_HPP

#include <array>
#include <string>
#include <vector>

#include "fingap/elliptic.hpp"
#include "fingap/jet.hpp"

namespace fingap {

/// Coupling constants (l0, l1, l2, l3) of the potential
/// u(x) = sum_i l_i (l_i + 1) wp(x + w_i).
struct CouplingVector {
  std::array<int, 4> l{};
  bool normalized = false;

  int operator[](int i) const { return l[i]; }
  int total() const { return l[0] + l[1] + l[2] + l[3]; }
  /// sum_i l_i (l_i + 1).
  int weight() const;
  /// l sorted into k0 >= k1 >= k2 >= k3.
  std::array<int, 4> sorted() const;
  std::string str() const;
};

/// Maps each negative l_i to -l_i - 1 (the potential is unchanged) and
/// rejects the zero vector.
CouplingVector normalize(std::array<int, 4> l);

/// Genus of the spectral curve from the four-case table in (k0, k3, l).
int genus_of(const CouplingVector& l);

/// Potential and its Taylor jet at x.
cplx potential(const CouplingVector& l, cplx x, const EllipticContext& ctx);
CJet potential_jet(const CouplingVector& l, cplx x, int order, const EllipticContext& ctx);

/// Distance from x to the nearest half period w with w a pole of the potential
/// or of any co-wp quotient (all four half-period classes).
double half_lattice_distance(cplx x, const EllipticContext& ctx);

/// Quasi-random points with Re in [0, 1) and |Im| <= min(0.45 Im tau, 0.6),
/// each at least 0.07 min(1, |tau|) away from every half period. The sequence
/// is deterministic; `seed` selects the starting index.
std::vector<cplx> regular_sample_points(int count, unsigned seed, const EllipticContext& ctx);
/// Regular points, pairwise apart, where the potential's summands are smallest.
std::vector<cplx> quiet_sample_points(const CouplingVector& l, int count, const EllipticContext& ctx);

}  // namespace fingap

#endif  // FINGAP_COUPLING_HPP
