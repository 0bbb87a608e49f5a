#include "fingap/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fingap {

namespace {

constexpr double kPoleDistance = 1e-8;

// Raw q-series pieces at a reduced point z0 (|Im z0| <= Im tau / 2), using at
// most `nterms` terms. All powers are formed as (p^2 w)^n and (p^2 / w)^n,
// whose moduli never exceed |p|^n, so nothing overflows for large Im tau.
struct SeriesSums {
  cplx cos_sum;  // sum n   (a_n + b_n) / (1 - p^{2n})
  cplx sin2_sum; // sum n^2 (a_n - b_n) / (1 - p^{2n})
  cplx sin0_sum; // sum     (a_n - b_n) / (1 - p^{2n})
};

SeriesSums series_sums(cplx z0, cplx p, int nterms) {
  const cplx p2 = p * p;
  const cplx w = std::exp(2.0 * pi * I * z0);
  const cplx rp = p2 * w;
  const cplx rm = p2 / w;
  cplx an = 1.0, bn = 1.0, p2n = 1.0;
  SeriesSums s{0.0, 0.0, 0.0};
  for (int n = 1; n <= nterms; ++n) {
    an *= rp;
    bn *= rm;
    p2n *= p2;
    const cplx denom = 1.0 - p2n;
    const cplx plus = (an + bn) / denom;
    const cplx minus = (an - bn) / denom;
    const double dn = n;
    s.cos_sum += dn * plus;
    s.sin2_sum += dn * dn * minus;
    s.sin0_sum += minus;
    if (dn * dn * (std::abs(an) + std::abs(bn)) < 1e-18 * (1.0 + std::abs(s.sin2_sum))) break;
  }
  return s;
}

cplx eta1_series(cplx p, int nterms) {
  const cplx p2 = p * p;
  cplx p2n = 1.0, acc = 0.0;
  for (int n = 1; n <= nterms; ++n) {
    p2n *= p2;
    const cplx t = double(n) * p2n / (1.0 - p2n);
    acc += t;
    if (std::abs(t) < 1e-18 * (1.0 + std::abs(acc))) break;
  }
  return pi * pi / 6.0 - 4.0 * pi * pi * acc;
}

cplx wp_reduced(cplx z0, cplx p, cplx eta1, int nterms) {
  const cplx s = std::sin(pi * z0);
  const SeriesSums ss = series_sums(z0, p, nterms);
  return -2.0 * eta1 + pi * pi / (s * s) - 4.0 * pi * pi * ss.cos_sum;
}

cplx wp_prime_reduced(cplx z0, cplx p, int nterms) {
  const cplx s = std::sin(pi * z0);
  const cplx c = std::cos(pi * z0);
  const SeriesSums ss = series_sums(z0, p, nterms);
  return -2.0 * pi * pi * pi * c / (s * s * s) - 8.0 * I * pi * pi * pi * ss.sin2_sum;
}

cplx zeta_reduced(cplx z0, cplx p, cplx eta1, int nterms) {
  const cplx s = std::sin(pi * z0);
  const cplx c = std::cos(pi * z0);
  const SeriesSums ss = series_sums(z0, p, nterms);
  return 2.0 * eta1 * z0 + pi * c / s - 2.0 * pi * I * ss.sin0_sum;
}

// Theta series with exponents combined before exponentiation.
cplx theta_series(int k, cplx v, cplx tau) {
  const double imtau = tau.imag();
  const double peak = std::abs(v.imag()) / (pi * imtau) + 2.0;
  cplx acc = (k == 3 || k == 4) ? cplx(1.0) : cplx(0.0);
  for (int n = (k <= 2 ? 0 : 1); n < 100000; ++n) {
    cplx term;
    if (k <= 2) {
      const double h = n + 0.5;
      const cplx base = pi * I * tau * h * h;
      const cplx ep = std::exp(base + I * (2.0 * n + 1.0) * v);
      const cplx em = std::exp(base - I * (2.0 * n + 1.0) * v);
      if (k == 1)
        term = (n % 2 ? -1.0 : 1.0) * (ep - em) / I;
      else
        term = ep + em;
    } else {
      const double h = n;
      const cplx base = pi * I * tau * h * h;
      const cplx ep = std::exp(base + I * (2.0 * n) * v);
      const cplx em = std::exp(base - I * (2.0 * n) * v);
      term = (k == 4 && n % 2 ? -1.0 : 1.0) * (ep + em);
    }
    acc += term;
    if (n > peak && std::abs(term) <= 1e-18 * std::abs(acc)) break;
  }
  return acc;
}

cplx theta1_prime_zero_series(cplx tau) {
  cplx acc = 0.0;
  for (int n = 0; n < 100000; ++n) {
    const double h = n + 0.5;
    const cplx term = (n % 2 ? -2.0 : 2.0) * (2.0 * n + 1.0) * std::exp(pi * I * tau * h * h);
    acc += term;
    if (std::abs(term) < 1e-18 * std::abs(acc)) break;
  }
  return acc;
}

void check_pole(cplx z, const EllipticContext& ctx, const char* what) {
  if (lattice_distance(z, ctx) < kPoleDistance)
    throw DomainError(std::string(what) + ": argument within 1e-8 of a lattice pole");
}

// Sign of wp_i under z -> z + m + n tau.
int co_wp_sign(int i, int m, int n) {
  const int s1 = (i == 1) ? 1 : ((m % 2) ? -1 : 1);
  const int s3 = (i == 3) ? 1 : ((n % 2) ? -1 : 1);
  return s1 * s3;
}

// sigma(z0 + m + n tau) = sign * exp(factor) * sigma(z0).
cplx sigma_shift_log(cplx z0, int m, int n, const EllipticContext& ctx) {
  const cplx eta = double(m) * ctx.eta1() + double(n) * ctx.eta3();
  const cplx omega = 0.5 * (double(m) + double(n) * ctx.tau());
  return 2.0 * eta * (z0 + omega);
}
int sigma_shift_sign(int m, int n) { return ((m + n + m * n) % 2) ? -1 : 1; }

}  // namespace

double EllipticContext::energy_scale() const {
  double s = 1.0;
  for (const auto& v : e_) s = std::max(s, std::abs(v));
  return s;
}

cplx EllipticContext::eta(int i) const {
  switch (i) {
    case 1: return eta1_;
    case 2: return -eta1_ - eta3_;
    case 3: return eta3_;
    default: throw DomainError("eta index must be 1, 2 or 3");
  }
}

EllipticContext make_context(cplx tau, int trunc_order) {
  if (!(tau.imag() > 0.0)) throw DomainError("make_context: Im tau must be positive");
  if (trunc_order < 8) throw DomainError("make_context: truncation order must be at least 8");

  EllipticContext ctx;
  ctx.tau_ = tau;
  ctx.p_ = std::exp(pi * I * tau);
  ctx.order_ = trunc_order;
  ctx.omega_ = {0.0, 0.5, -(tau + 1.0) / 2.0, tau / 2.0};

  auto constants = [&](int nterms, std::array<cplx, 3>& e, cplx& eta1) {
    eta1 = eta1_series(ctx.p_, nterms);
    const cplx pts[3] = {0.5, (1.0 + tau) / 2.0, tau / 2.0};
    for (int i = 0; i < 3; ++i) {
      cplx z0 = pts[i];
      if (i == 1) z0 -= tau;  // keep |Im z0| <= Im tau / 2
      if (i == 1) z0 = -z0;   // wp is even; keeps Re within the strip
      e[i] = wp_reduced(z0, ctx.p_, eta1, nterms);
    }
  };

  std::array<cplx, 3> e_lo{}, e_hi{};
  cplx eta_lo, eta_hi;
  constants(trunc_order, e_lo, eta_lo);
  constants(trunc_order + 4, e_hi, eta_hi);
  double scale = 1.0, diff = std::abs(eta_lo - eta_hi);
  for (int i = 0; i < 3; ++i) {
    scale = std::max(scale, std::abs(e_hi[i]));
    diff = std::max(diff, std::abs(e_lo[i] - e_hi[i]));
  }
  if (diff > 1e-12 * scale)
    throw NumericalError("make_context: truncation order " + std::to_string(trunc_order) +
                         " too small (orders N and N+4 differ by " + std::to_string(diff / scale) + ")");

  ctx.e_ = e_lo;
  ctx.eta1_ = eta_lo;
  ctx.eta3_ = tau * eta_lo - pi * I;
  const cplx e1 = ctx.e_[0], e2 = ctx.e_[1], e3 = ctx.e_[2];
  ctx.g2_ = -4.0 * (e1 * e2 + e2 * e3 + e3 * e1);
  ctx.g3_ = 4.0 * e1 * e2 * e3;
  for (int k = 1; k <= 4; ++k) ctx.theta0_[k - 1] = theta_series(k, 0.0, tau);
  ctx.theta1p0_ = theta1_prime_zero_series(tau);
  return ctx;
}

EllipticContext make_context_adaptive(cplx tau) {
  for (int order = 64; order <= (1 << 16); order *= 2) {
    try {
      return make_context(tau, order);
    } catch (const NumericalError&) {
    }
  }
  throw NumericalError("make_context_adaptive: q-series did not converge; |p| too close to 1");
}

ReducedPoint reduce(cplx z, const EllipticContext& ctx) {
  const cplx tau = ctx.tau();
  ReducedPoint r;
  r.n = static_cast<int>(std::lround(z.imag() / tau.imag()));
  cplx z1 = z - double(r.n) * tau;
  r.m = static_cast<int>(std::lround(z1.real()));
  r.z0 = z1 - double(r.m);
  return r;
}

double lattice_distance(cplx z, const EllipticContext& ctx) {
  const ReducedPoint r = reduce(z, ctx);
  double best = INFINITY;
  for (int m = -1; m <= 1; ++m)
    for (int n = -1; n <= 1; ++n) best = std::min(best, std::abs(r.z0 - double(m) - double(n) * ctx.tau()));
  return best;
}

cplx wp(cplx z, const EllipticContext& ctx) {
  check_pole(z, ctx, "wp");
  return wp_reduced(reduce(z, ctx).z0, ctx.nome(), ctx.eta1(), ctx.trunc_order());
}

cplx wp_prime(cplx z, const EllipticContext& ctx) {
  check_pole(z, ctx, "wp_prime");
  return wp_prime_reduced(reduce(z, ctx).z0, ctx.nome(), ctx.trunc_order());
}

cplx wp_second(cplx z, const EllipticContext& ctx) {
  const cplx v = wp(z, ctx);
  return 6.0 * v * v - 0.5 * ctx.g2();
}

cplx zeta_w(cplx z, const EllipticContext& ctx) {
  check_pole(z, ctx, "zeta_w");
  const ReducedPoint r = reduce(z, ctx);
  return zeta_reduced(r.z0, ctx.nome(), ctx.eta1(), ctx.trunc_order()) + 2.0 * double(r.m) * ctx.eta1() +
         2.0 * double(r.n) * ctx.eta3();
}

cplx sigma_w(cplx z, const EllipticContext& ctx) {
  const ReducedPoint r = reduce(z, ctx);
  const cplx base = std::exp(ctx.eta1() * r.z0 * r.z0) * theta_series(1, pi * r.z0, ctx.tau()) /
                    (pi * ctx.theta1_prime_zero());
  return double(sigma_shift_sign(r.m, r.n)) * std::exp(sigma_shift_log(r.z0, r.m, r.n, ctx)) * base;
}

cplx co_sigma(int i, cplx z, const EllipticContext& ctx) {
  if (i < 1 || i > 3) throw DomainError("co_sigma index must be 1, 2 or 3");
  const ReducedPoint r = reduce(z, ctx);
  const cplx base = std::exp(ctx.eta1() * r.z0 * r.z0) * theta_series(i + 1, pi * r.z0, ctx.tau()) /
                    ctx.theta_zero(i + 1);
  const int sign = sigma_shift_sign(r.m, r.n) * co_wp_sign(i, r.m, r.n);
  return double(sign) * std::exp(sigma_shift_log(r.z0, r.m, r.n, ctx)) * base;
}

cplx co_wp(int i, cplx z, const EllipticContext& ctx) {
  if (i < 1 || i > 3) throw DomainError("co_wp index must be 1, 2 or 3");
  check_pole(z, ctx, "co_wp");
  const ReducedPoint r = reduce(z, ctx);
  const cplx v = pi * r.z0;
  const cplx val = pi * ctx.theta1_prime_zero() * theta_series(i + 1, v, ctx.tau()) /
                   (ctx.theta_zero(i + 1) * theta_series(1, v, ctx.tau()));
  return double(co_wp_sign(i, r.m, r.n)) * val;
}

cplx theta(int k, cplx v, const EllipticContext& ctx) {
  if (k < 1 || k > 4) throw DomainError("theta index must be in 1..4");
  return theta_series(k, v, ctx.tau());
}

CJet wp_jet(cplx z0, int order, const EllipticContext& ctx) {
  CJet::Coeffs a = CJet::Coeffs::Zero(order + 1);
  a(0) = wp(z0, ctx);
  if (order >= 1) a(1) = wp_prime(z0, ctx);
  // wp'' = 6 wp^2 - g2/2, matched term by term.
  for (int k = 0; k + 2 <= order; ++k) {
    cplx conv = 0.0;
    for (int j = 0; j <= k; ++j) conv += a(j) * a(k - j);
    cplx rhs = 6.0 * conv;
    if (k == 0) rhs -= 0.5 * ctx.g2();
    a(k + 2) = rhs / double((k + 1) * (k + 2));
  }
  return CJet(a);
}

std::array<CJet, 3> co_wp_jets(cplx z0, int order, const EllipticContext& ctx) {
  std::array<CJet::Coeffs, 3> c;
  for (int i = 0; i < 3; ++i) {
    c[i] = CJet::Coeffs::Zero(order + 1);
    c[i](0) = co_wp(i + 1, z0, ctx);
  }
  // wp_i' = -wp_j wp_k for {i, j, k} = {1, 2, 3}.
  for (int k = 0; k < order; ++k) {
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3, l = (i + 2) % 3;
      cplx conv = 0.0;
      for (int m = 0; m <= k; ++m) conv += c[j](m) * c[l](k - m);
      c[i](k + 1) = -conv / double(k + 1);
    }
  }
  return {CJet(c[0]), CJet(c[1]), CJet(c[2])};
}

CJet wp_square_jet(int order, const EllipticContext& ctx) {
  const int nmax = order / 2 + 1;
  std::vector<cplx> c(nmax + 2, 0.0);
  if (nmax >= 2) c[2] = ctx.g2() / 20.0;
  if (nmax >= 3) c[3] = ctx.g3() / 28.0;
  for (int n = 4; n <= nmax; ++n) {
    cplx acc = 0.0;
    for (int m = 2; m <= n - 2; ++m) acc += c[m] * c[n - m];
    c[n] = 3.0 * acc / double((2 * n + 1) * (n - 3));
  }
  CJet::Coeffs j = CJet::Coeffs::Zero(order + 1);
  j(0) = 1.0;
  for (int n = 2; 2 * n <= order; ++n) j(2 * n) = c[n];
  return CJet(j);
}

}  // namespace fingap
