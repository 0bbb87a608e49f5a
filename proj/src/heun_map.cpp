#include "fingap/heun_map.hpp"

#include <cmath>

namespace fingap {

namespace {

cplx lattice_a(const EllipticContext& ctx) { return (ctx.e(2) - ctx.e(3)) / (ctx.e(1) - ctx.e(3)); }

cplx shift_c0(const std::array<int, 4>& l, cplx a) {
  double w = 0;
  for (int i = 0; i < 4; ++i) w += l[i] * (l[i] + 1);
  const double s02 = l[0] + l[2] + 2, s01 = l[0] + l[1] + 2;
  return (a + 1.0) / 3.0 * w - a * s02 * s02 - s01 * s01;
}

/// Returns n when v = n + 1/2 within tol.
int half_integer(cplx v, const char* name) {
  const double n = std::round(v.real() - 0.5);
  if (std::abs(v - cplx(n + 0.5)) > 1e-10)
    throw DomainError(std::string("heun_to_ino: ") + name + " is not in 1/2 + Z");
  return static_cast<int>(n);
}

CPoly compose_affine(const CPoly& p, cplx slope, cplx shift) {
  const CPoly lin{shift, slope};
  CPoly acc = CPoly::constant(p.leading());
  for (int k = p.degree() - 1; k >= 0; --k) acc = acc * lin + CPoly::constant(p[k]);
  return acc;
}

}  // namespace

HeunParams ino_to_heun(const CouplingVector& l, cplx E, const EllipticContext& ctx) {
  HeunParams h;
  h.a = lattice_a(ctx);
  h.t = 1.0 / h.a;
  h.alpha = 0.5 * (l[0] + l[1] + l[2] + l[3] + 4);
  h.beta = 0.5 * (l[0] + l[1] + l[2] - l[3] + 3);
  h.gamma = l[0] + 1.5;
  h.delta = l[1] + 1.5;
  h.epsilon = l[2] + 1.5;
  h.heun_shift_c0 = shift_c0(l.l, h.a);
  h.q = -(E / (ctx.e(1) - ctx.e(3)) + h.heun_shift_c0) / (4.0 * h.a);
  return h;
}

InoPoint heun_to_ino(const HeunParams& h, const EllipticContext& ctx) {
  std::array<int, 4> raw{};
  raw[0] = half_integer(h.gamma, "gamma") - 1;
  raw[1] = half_integer(h.delta, "delta") - 1;
  raw[2] = half_integer(h.epsilon, "epsilon") - 1;
  raw[3] = half_integer(h.alpha - h.beta, "alpha - beta");
  if (std::abs(h.gamma + h.delta + h.epsilon - h.alpha - h.beta - 1.0) > 1e-10)
    throw DomainError("heun_to_ino: gamma + delta + epsilon != alpha + beta + 1");
  const cplx a = lattice_a(ctx);
  if (std::abs(h.t * a - 1.0) > 1e-10) throw DomainError("heun_to_ino: t does not equal 1/a for this lattice");
  // c0 depends on the sign choice of each l_i, so E is recovered before normalizing
  const cplx E = (ctx.e(1) - ctx.e(3)) * (-4.0 * a * h.q - shift_c0(raw, a));
  return {normalize(raw), E};
}

cplx heun_energy(cplx q, const CouplingVector& l, const EllipticContext& ctx) {
  const cplx a = lattice_a(ctx);
  return (ctx.e(1) - ctx.e(3)) * (-4.0 * a * q - shift_c0(l.l, a));
}

cplx heun_accessory(cplx E, const CouplingVector& l, const EllipticContext& ctx) {
  return ino_to_heun(l, E, ctx).q;
}

cplx heun_variable(cplx x, const EllipticContext& ctx) { return (ctx.e(1) - ctx.e(3)) / (wp(x, ctx) - ctx.e(3)); }

std::pair<CPoly, CPoly> heun_curve(const SpectralCurve& curve, const CouplingVector& l, const EllipticContext& ctx) {
  const cplx shift = heun_energy(0.0, l, ctx);
  const cplx slope = 4.0 * (ctx.e(3) - ctx.e(2));
  const CPoly Qt = compose_affine(curve.Q, slope, shift);
  const CPoly Q1t = compose_affine(curve.Q1, slope, shift);
  return {cplx(1.0) / std::pow(slope, curve.Q.degree()) * Qt, cplx(1.0) / std::pow(slope, curve.Q1.degree()) * Q1t};
}

std::array<int, 3> cycle_winding_numbers(cplx eps, const EllipticContext& ctx, int samples) {
  const std::array<cplx, 3> targets{0.0, 1.0, 1.0 / lattice_a(ctx)};
  std::array<double, 3> turn{};
  cplx prev = heun_variable(eps, ctx);
  for (int k = 1; k <= samples; ++k) {
    const cplx w = heun_variable(eps + double(k) / samples, ctx);
    for (int i = 0; i < 3; ++i) turn[i] += std::arg((w - targets[i]) / (prev - targets[i]));
    prev = w;
  }
  std::array<int, 3> out{};
  for (int i = 0; i < 3; ++i) out[i] = static_cast<int>(std::lround(turn[i] / (2 * pi)));
  return out;
}

CycleMonodromy cycle_monodromy_eigenvalues(cplx q_star, const CouplingVector& l, const SpectralCurve& curve,
                                           const XiExpansion& xi, const EllipticContext& ctx) {
  CycleMonodromy out;
  out.q_star = q_star;
  out.E_star = heun_energy(q_star, l, ctx);
  if (std::abs(curve.Q(out.E_star)) < 1e-7 * std::pow(ctx.energy_scale(), curve.Q.degree()))
    throw DomainError("cycle_monodromy_eigenvalues: Q~(q*) = 0 needs a different solution basis");
  cplx E0 = curve.roots.front();
  double best = -1;
  for (cplx r : curve.roots) {
    double d = INFINITY;
    for (cplx s : curve.roots)
      if (s != r) d = std::min(d, std::abs(s - r));
    if (d > best) best = d, E0 = r;
  }
  out.q0 = heun_accessory(E0, l, ctx);
  out.sign0 = base_sign_at_root(E0, xi, curve, ctx);
  const cplx B = hyperelliptic_multiplier(out.E_star, E0, out.sign0, curve, xi, ctx).multiplier;
  const double parity = (l[0] + l[1]) % 2 == 0 ? 1.0 : -1.0;
  out.eigenvalues = {parity * B, parity / B};
  return out;
}

}  // namespace fingap
