#ifndef FINGAP_ODE_HPP
#define FINGAP_ODE_HPP

#include "fingap/coupling.hpp"

namespace fingap {

/// A point on a solution of (H - E) f = 0: the pair (f(x), f'(x)).
struct SolutionState {
  cplx x;
  cplx f;
  cplx df;
};

/// Taylor jet of the solution through `s`, generated from f'' = (u - E) f.
CJet solution_jet(const CouplingVector& l, cplx E, const SolutionState& s, int order, const EllipticContext& ctx);

/// Carries `s` along the straight segment to `target` with a Taylor method
/// (order 30, steps kept well inside the distance to the nearest pole).
/// Throws DomainError when the segment comes within `clearance` of a pole of u.
SolutionState integrate_solution(const CouplingVector& l, cplx E, SolutionState s, cplx target,
                                 const EllipticContext& ctx, double clearance = 0.02);

/// Distance from x to the nearest pole of the potential.
double pole_distance(const CouplingVector& l, cplx x, const EllipticContext& ctx);

/// Distance from the segment a -> b to the nearest pole of the potential.
double segment_pole_distance(const CouplingVector& l, cplx a, cplx b, const EllipticContext& ctx);

}  // namespace fingap

#endif  // FINGAP_ODE_HPP
