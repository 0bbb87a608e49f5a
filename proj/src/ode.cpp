#include "fingap/ode.hpp"

#include <algorithm>
#include <cmath>

namespace fingap {

namespace {

constexpr int kOrder = 30;

}  // namespace

double pole_distance(const CouplingVector& l, cplx x, const EllipticContext& ctx) {
  double d = INFINITY;
  for (int i = 0; i < 4; ++i)
    if (l[i] > 0) d = std::min(d, lattice_distance(x + ctx.half_period(i), ctx));
  return d;
}

double segment_pole_distance(const CouplingVector& l, cplx a, cplx b, const EllipticContext& ctx) {
  // sample finely, then refine around the closest sample
  const int n = 256;
  double best = INFINITY;
  int arg = 0;
  for (int k = 0; k <= n; ++k) {
    const double d = pole_distance(l, a + (b - a) * (double(k) / n), ctx);
    if (d < best) best = d, arg = k;
  }
  double lo = std::max(0, arg - 1) / double(n), hi = std::min(n, arg + 1) / double(n);
  for (int it = 0; it < 60; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (pole_distance(l, a + (b - a) * m1, ctx) < pole_distance(l, a + (b - a) * m2, ctx))
      hi = m2;
    else
      lo = m1;
  }
  return std::min(best, pole_distance(l, a + (b - a) * (0.5 * (lo + hi)), ctx));
}

CJet solution_jet(const CouplingVector& l, cplx E, const SolutionState& s, int order, const EllipticContext& ctx) {
  const CJet v = potential_jet(l, s.x, std::max(order - 2, 0), ctx) - E;
  CJet::Coeffs c = CJet::Coeffs::Zero(order + 1);
  c(0) = s.f;
  if (order >= 1) c(1) = s.df;
  for (int n = 0; n + 2 <= order; ++n) {
    cplx acc = 0.0;
    for (int i = 0; i <= n; ++i) acc += v[i] * c(n - i);
    c(n + 2) = acc / double((n + 1) * (n + 2));
  }
  return CJet(c);
}

SolutionState integrate_solution(const CouplingVector& l, cplx E, SolutionState s, cplx target,
                                 const EllipticContext& ctx, double clearance) {
  if (segment_pole_distance(l, s.x, target, ctx) < clearance)
    throw DomainError("integrate_solution: segment passes within " + std::to_string(clearance) + " of a pole");
  const cplx start = s.x;
  const double total = std::abs(target - start);
  if (total == 0) return s;
  const cplx dir = (target - start) / total;
  double done = 0;
  while (done < total) {
    const CJet f = solution_jet(l, E, s, kOrder, ctx);
    double h = std::min(0.3 * pole_distance(l, s.x, ctx), total - done);
    const double mag = std::abs(s.f) + std::abs(s.df) * h + 1e-300;
    for (int guard = 0; guard < 60; ++guard) {
      const double tail = std::abs(f[kOrder]) * std::pow(h, kOrder) + std::abs(f[kOrder - 1]) * std::pow(h, kOrder - 1);
      if (tail <= 1e-17 * mag) break;
      h *= 0.7;
    }
    const cplx t = h * dir;
    s.f = f.eval(t);
    s.df = f.derivative().eval(t);
    done += h;
    s.x = done >= total ? target : start + done * dir;
  }
  return s;
}

}  // namespace fingap
