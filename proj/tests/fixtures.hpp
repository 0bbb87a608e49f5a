#ifndef FINGAP_TESTS_FIXTURES_HPP
#define FINGAP_TESTS_FIXTURES_HPP

// Closed-form reference data for the two worked couplings (0,0,0,1) and
// (2,1,0,0), written in terms of the lattice constants.

#include "fingap/elliptic.hpp"
#include "fingap/polynomial.hpp"

namespace fixture {

using fingap::cplx;
using fingap::CPoly;
using fingap::EllipticContext;

inline CPoly q_0001(const EllipticContext& c) {
  return CPoly::from_roots(std::vector<cplx>{-c.e(1), -c.e(2), -c.e(3)});
}

inline CPoly q1_0001(const EllipticContext& c) { return CPoly{-2.0 * c.eta1(), 1.0}; }

inline CPoly q_2100(const EllipticContext& c) {
  const cplx e1 = c.e(1), g2 = c.g2();
  const CPoly quartic{81.0 * g2 * g2 - 3640.0 * g2 * e1 * e1 + 19216.0 * std::pow(e1, 4),
                      -(200.0 * g2 * e1 - 5920.0 * std::pow(e1, 3)), 56.0 * g2 - 144.0 * e1 * e1,
                      -224.0 * e1, 16.0};
  return (1.0 / 16.0) * (CPoly{4.0 * e1, 1.0} * quartic);
}

inline CPoly q1_2100(const EllipticContext& c) {
  const cplx e1 = c.e(1), g2 = c.g2(), eta1 = c.eta1();
  return CPoly{0.75 * g2 - 27.0 * e1 * e1 + 4.0 * e1 * eta1, -(5.0 * e1 + 8.0 * eta1), 1.0};
}

// Xi(x, E) for (2,1,0,0) as coefficients of E^0, E^1, E^2 evaluated at x.
inline std::array<cplx, 3> xi_2100_slices(cplx x, const EllipticContext& c) {
  const cplx w = fingap::wp(x, c), w1 = fingap::wp(x + 0.5, c), e1 = c.e(1);
  return {9.0 * w * w - 6.0 * e1 * w + 4.0 * e1 * w1 - 27.0 * e1 * e1, 3.0 * w + w1 - 5.0 * e1, 1.0};
}

}  // namespace fixture

#endif
