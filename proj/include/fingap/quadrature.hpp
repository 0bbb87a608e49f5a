#ifndef FINGAP_QUADRATURE_HPP
#define FINGAP_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "fingap/types.hpp"

namespace fingap {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

using PathIntegrand = std::function<cplx(cplx)>;

/// Integral of f along the straight segment a -> b, adaptive bisection
/// comparing 20- and 10-point Gauss-Legendre until the estimate changes by
/// less than tol * max(1, |result|). Throws NumericalError past max_depth.
cplx integrate_segment(const PathIntegrand& f, cplx a, cplx b, double tol = 1e-12, int max_depth = 40);

/// Integral over t in [0, 1] of f(t) for a complex-valued f of a real variable.
cplx integrate_unit(const std::function<cplx(double)>& f, double tol = 1e-12, int max_depth = 40);

}  // namespace fingap

#endif  // FINGAP_QUADRATURE_HPP
