#include "fingap/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "fingap/ode.hpp"
#include "fingap/quadrature.hpp"

namespace fingap {

namespace {

using Fn = std::function<cplx(cplx)>;

// Total change of arg f along the segment a -> b, bisecting until each step
// turns by less than pi/4.
double arg_change(const Fn& f, cplx a, cplx b, cplx fa, cplx fb, int depth) {
  const cplx m = 0.5 * (a + b);
  const cplx fm = f(m);
  const double d1 = std::arg(fm / fa), d2 = std::arg(fb / fm);
  if (std::abs(d1) < pi / 4 && std::abs(d2) < pi / 4 && std::abs(d1 + d2 - std::arg(fb / fa)) < 1e-9) return d1 + d2;
  if (depth > 40) throw NumericalError("arg_change: cannot resolve the argument along the path");
  return arg_change(f, a, m, fa, fm, depth + 1) + arg_change(f, m, b, fm, fb, depth + 1);
}

double total_arg_change(const Fn& f, cplx a, cplx b, int pieces) {
  double total = 0;
  cplx prev = f(a);
  for (int k = 1; k <= pieces; ++k) {
    const cplx lo = a + (b - a) * (double(k - 1) / pieces), hi = a + (b - a) * (double(k) / pieces);
    const cplx next = f(hi);
    total += arg_change(f, lo, hi, prev, next, 0);
    prev = next;
  }
  return total;
}

// Distance to the nearest zero of Xi(., E) estimated from the log-derivative
// with the known poles (order 2 l_i at -w_i) removed, minimised over a fine
// sampling of the segment.
double xi_zero_clearance(const XiExpansion& xi, cplx E, cplx a, cplx b, const EllipticContext& ctx) {
  const int n = std::max(200, int(400 * std::abs(b - a)));
  double best = INFINITY;
  for (int k = 0; k <= n; ++k) {
    const cplx x = a + (b - a) * (double(k) / n);
    const CJet h = xi_jet(xi, x, E, 1, ctx);
    cplx L = h.deriv(1) / h.value();
    for (int i = 0; i < 4; ++i)
      if (xi.coupling[i] > 0) L += 2.0 * xi.coupling[i] / reduce(x + ctx.half_period(i), ctx).z0;
    best = std::min(best, 1.0 / std::abs(L));
  }
  return best;
}

double curve_scale(const SpectralCurve& curve, const EllipticContext& ctx) {
  return std::pow(ctx.energy_scale(), curve.Q.degree());
}

struct PathChoice {
  cplx eps;
  bool ok = false;
};

// Clearances shrink with the lattice when Im tau < 1.
PathChoice choose_x_path(const XiExpansion& xi, cplx E, LatticePeriod P, const EllipticContext& ctx,
                         double zero_clearance) {
  const cplx p = P.value(ctx);
  const double unit = std::min(1.0, ctx.tau().imag());
  for (int attempt = 0; attempt < 7; ++attempt) {
    const cplx eps = x_path_start(xi.coupling, P, ctx, attempt);
    if (segment_pole_distance(xi.coupling, eps, eps + p, ctx) < 0.05 * unit) continue;
    if (xi_zero_clearance(xi, E, eps, eps + p, ctx) < zero_clearance * unit) continue;
    return {eps, true};
  }
  return {};
}

int winding_sign(const XiExpansion& xi, cplx E, cplx a, cplx b, const EllipticContext& ctx) {
  const Fn f = [&](cplx x) { return xi_value(xi, x, E, ctx); };
  const double d = total_arg_change(f, a, b, std::max(64, int(64 * std::abs(b - a))));
  const double k = std::round(d / (2 * pi));
  if (std::abs(d - 2 * pi * k) > 1e-6) throw NumericalError("winding_sign: Xi is not periodic along the path");
  return (static_cast<long>(k) % 2 == 0) ? 1 : -1;
}

struct Obstacle {
  cplx c;
  double r;
};

void route(cplx a, cplx b, const std::vector<Obstacle>& obs, std::vector<cplx>& out, int depth) {
  if (depth > 16) throw NumericalError("abelian_integral: path routing failed");
  const cplx d = b - a;
  const double len2 = std::norm(d);
  int worst = -1;
  double worst_ratio = 1;
  for (size_t k = 0; k < obs.size(); ++k) {
    const double t = len2 > 0 ? std::clamp(std::real((obs[k].c - a) * std::conj(d)) / len2, 0.0, 1.0) : 0.0;
    const double dist = std::abs(obs[k].c - (a + t * d));
    if (dist / obs[k].r < worst_ratio) worst_ratio = dist / obs[k].r, worst = int(k);
  }
  if (worst < 0) {
    out.push_back(b);
    return;
  }
  const Obstacle& o = obs[worst];
  const double t = std::real((o.c - a) * std::conj(d)) / len2;
  cplx n = a + t * d - o.c;
  n = std::abs(n) > 1e-14 * std::sqrt(len2) ? n / std::abs(n) : I * d / std::sqrt(len2);
  const cplx w = o.c + 2.0 * o.r * n;
  route(a, w, obs, out, depth + 1);
  route(w, b, obs, out, depth + 1);
}

}  // namespace

cplx x_path_start(const CouplingVector& l, LatticePeriod P, const EllipticContext& ctx, int attempt) {
  (void)l;
  const cplx base = P.n == 0 ? ctx.tau() / 4.0 : (1.0 + ctx.tau()) / 4.0;
  const cplx step = P.n == 0 ? 0.06 * ctx.tau() : cplx(0.06);
  const int k = (attempt + 1) / 2;
  return base + double(attempt % 2 ? k : -k) * step;
}

cplx nearest_root(const SpectralCurve& curve, cplx near) {
  return *std::min_element(curve.roots.begin(), curve.roots.end(),
                           [&](cplx a, cplx b) { return std::abs(a - near) < std::abs(b - near); });
}

MonodromyResult direct_multiplier(cplx E, const XiExpansion& xi, const SpectralCurve& curve,
                                  const EllipticContext& ctx, LatticePeriod P, std::optional<cplx> branch) {
  MonodromyResult r;
  r.E_star = E;
  r.period = P;
  r.method = MonodromyMethod::direct;
  const cplx q = curve.Q(E);
  r.sqrt_minus_Q = branch ? *branch : std::sqrt(-q);
  if (P.is_zero()) {
    r.multiplier = 1.0;
    return r;
  }
  if (std::abs(q) < 1e-7 * curve_scale(curve, ctx))
    throw DomainError("direct_multiplier: Q(E) = 0; use base_sign_at_root");
  const auto path = choose_x_path(xi, E, P, ctx, 0.03);
  if (!path.ok) throw DomainError("direct_multiplier: a zero of Xi stays within 0.03 of all seven x-paths");
  const cplx a = path.eps, b = path.eps + P.value(ctx);
  const cplx J = integrate_segment([&](cplx x) { return 1.0 / xi_value(xi, x, E, ctx); }, a, b, 1e-11);
  const int s = winding_sign(xi, E, a, b, ctx);
  r.multiplier = double(s) * std::exp(r.sqrt_minus_Q * J);
  r.path = {a, b};
  return r;
}

int base_sign_at_root(cplx E0, const XiExpansion& xi, const SpectralCurve& curve, const EllipticContext& ctx,
                      LatticePeriod P) {
  if (P.is_zero()) return 1;
  if (std::abs(curve.Q(E0)) > 1e-7 * curve_scale(curve, ctx))
    throw DomainError("base_sign_at_root: E0 is not a root of Q");
  const auto path = choose_x_path(xi, E0, P, ctx, 0.03);
  if (!path.ok) throw DomainError("base_sign_at_root: a zero of Xi stays within 0.03 of all seven x-paths");
  return winding_sign(xi, E0, path.eps, path.eps + P.value(ctx), ctx);
}

AbelianIntegral abelian_integral(const CPoly& num, const CPoly& Q, cplx E0, cplx E1, double clearance) {
  AbelianIntegral out;
  out.waypoints = {E0};
  const CPoly Qd = Q.deflate(E0);
  const cplx s1 = std::sqrt(E1 - E0);
  // factored form: no cancellation near clustered roots
  const std::vector<cplx> roots = Qd.degree() > 0 ? polynomial_roots(Qd) : std::vector<cplx>{};
  const cplx lead = -Qd.leading();
  const Fn v = [&](cplx s) {
    const cplx E = E0 + s * s;
    cplx acc = lead;
    for (cplx r : roots) acc *= E - r;
    return acc;
  };
  if (s1 == 0.0) {
    out.value = 0.0;
    out.sqrt_end = 0.0;
    return out;
  }

  std::vector<Obstacle> obs;
  std::vector<cplx> branch_points;
  for (cplx r : roots) {
    const cplx sk = std::sqrt(r - E0);
    for (cplx c : {sk, -sk}) {
      double rho = std::min(clearance / (2.0 * std::abs(sk)), 0.45 * std::abs(sk));
      rho = std::min(rho, 0.5 * std::abs(s1 - c));
      obs.push_back({c, rho});
      branch_points.push_back(c);
    }
  }
  std::vector<cplx> pts{0.0};
  route(0.0, s1, obs, pts, 0);

  cplx w = std::sqrt(v(0.0));
  cplx total = 0.0;
  // Each factor (s - c) of -Qd turns by at most |b - a| / dist(c, [a, b]), so
  // pieces with sum |b - a| / dist <= pi/4 keep sqrt(-Qd) within pi/8.
  std::function<void(cplx, cplx, int)> piece = [&](cplx a, cplx b, int depth) {
    const cplx d = b - a;
    double turn = 0;
    for (cplx c : branch_points) {
      const double t = std::clamp(std::real((c - a) * std::conj(d)) / std::norm(d), 0.0, 1.0);
      turn += std::abs(d) / std::abs(c - (a + t * d));
    }
    if (turn > pi / 4) {
      if (depth > 60) throw NumericalError("abelian_integral: branch tracking failed");
      piece(a, 0.5 * (a + b), depth + 1);
      piece(0.5 * (a + b), b, depth + 1);
      return;
    }
    const cplx wa = w;
    auto branch = [&](cplx s) {
      const cplx r = std::sqrt(v(s));
      return std::real(r * std::conj(wa)) >= 0 ? r : -r;
    };
    total += integrate_segment([&](cplx s) { return 2.0 * num(E0 + s * s) / branch(s); }, a, b, 1e-11);
    w = branch(b);
  };
  for (size_t k = 1; k < pts.size(); ++k) {
    piece(pts[k - 1], pts[k], 0);
    out.waypoints.push_back(E0 + pts[k] * pts[k]);
  }
  out.value = total;
  out.sqrt_end = s1 * w;
  return out;
}

MonodromyResult hyperelliptic_multiplier(cplx E_star, cplx E0, int sign0, const SpectralCurve& curve,
                                         const XiExpansion& xi, const EllipticContext& ctx, LatticePeriod P) {
  MonodromyResult r;
  r.E_star = E_star;
  r.base_point = E0;
  r.base_sign = sign0;
  r.period = P;
  r.method = MonodromyMethod::hyperelliptic;
  if (P.is_zero()) {
    r.multiplier = 1.0;
    r.sqrt_minus_Q = std::sqrt(-curve.Q(E_star));
    return r;
  }
  const double scale = curve_scale(curve, ctx);
  if (std::abs(curve.Q(E0)) > 1e-7 * scale) throw DomainError("hyperelliptic_multiplier: E0 is not a root of Q");
  if (E_star == E0) {
    r.multiplier = double(sign0);
    r.sqrt_minus_Q = 0.0;
    r.path = {E0};
    return r;
  }
  if (std::abs(curve.Q(E_star)) < 1e-7 * scale) throw DomainError("hyperelliptic_multiplier: Q(E*) = 0");
  const CPoly ip = period_integral(xi, P.m, P.n, ctx);
  const auto ai = abelian_integral(ip, curve.Q, E0, E_star, 1e-2 * ctx.energy_scale());
  r.multiplier = double(sign0) * std::exp(-0.5 * ai.value);
  r.sqrt_minus_Q = ai.sqrt_end;
  r.path = ai.waypoints;
  return r;
}

MonodromyResult root_multiplier(cplx Ek, cplx E0, int sign0, const SpectralCurve& curve, const XiExpansion& xi,
                                const EllipticContext& ctx, LatticePeriod P) {
  MonodromyResult r;
  r.E_star = Ek;
  r.base_point = E0;
  r.base_sign = sign0;
  r.period = P;
  r.method = MonodromyMethod::hyperelliptic;
  r.sqrt_minus_Q = 0.0;
  if (P.is_zero() || Ek == E0) {
    r.multiplier = P.is_zero() ? 1.0 : double(sign0);
    return r;
  }
  // meeting point off the segment, away from the other roots
  const double clearance = 1e-2 * ctx.energy_scale();
  cplx mid = 0.5 * (E0 + Ek);
  const cplx normal = I * (Ek - E0) / std::abs(Ek - E0);
  for (int k = 0; k < 8; ++k) {
    double nearest = INFINITY;
    for (cplx root : curve.roots) nearest = std::min(nearest, std::abs(root - mid));
    if (nearest > 0.1 * std::abs(Ek - E0)) break;
    mid += 0.25 * std::abs(Ek - E0) * normal;
  }
  const CPoly ip = period_integral(xi, P.m, P.n, ctx);
  const auto a = abelian_integral(ip, curve.Q, E0, mid, clearance);
  const auto b = abelian_integral(ip, curve.Q, Ek, mid, clearance);
  const cplx sigma = a.sqrt_end / b.sqrt_end;
  if (std::abs(std::abs(sigma) - 1.0) > 1e-8) throw NumericalError("root_multiplier: branches do not match at the meeting point");
  r.multiplier = double(sign0) * std::exp(-0.5 * (a.value - sigma * b.value));
  r.path = a.waypoints;
  r.path.insert(r.path.end(), b.waypoints.rbegin(), b.waypoints.rend());
  return r;
}

}  // namespace fingap
