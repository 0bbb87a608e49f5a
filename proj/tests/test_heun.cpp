#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fingap/heun_map.hpp"

using namespace fingap;

namespace {

// Heun equation residual for f~ = f / Phi~(w) where f solves the elliptic
// equation with data (f, f') at x; derivatives in w by the chain rule.
cplx heun_residual(const CouplingVector& l, cplx E, cplx x, cplx f, cplx df, const EllipticContext& ctx) {
  const auto h = ino_to_heun(l, E, ctx);
  const cplx e13 = ctx.e(1) - ctx.e(3);
  const cplx P = wp(x, ctx) - ctx.e(3), P1 = wp_prime(x, ctx), P2 = wp_second(x, ctx);
  const cplx w = e13 / P;
  const cplx w1 = -e13 * P1 / (P * P);
  const cplx w2 = -e13 * (P2 / (P * P) - 2.0 * P1 * P1 / (P * P * P));
  const cplx d2f = (potential(l, x, ctx) - E) * f;
  const cplx fw = df / w1;
  const cplx fww = (d2f - fw * w2) / (w1 * w1);
  const cplx a = h.a;
  const cplx Lw = 0.5 * (l[0] + 1) / w + 0.5 * (l[1] + 1) / (w - 1.0) + 0.5 * (l[2] + 1) * a / (a * w - 1.0);
  const cplx Lww = -0.5 * (l[0] + 1) / (w * w) - 0.5 * (l[1] + 1) / ((w - 1.0) * (w - 1.0)) -
                   0.5 * (l[2] + 1) * a * a / ((a * w - 1.0) * (a * w - 1.0));
  // f~ = f exp(-L)
  const cplx g = f, gw = fw - Lw * f, gww = fww - 2.0 * Lw * fw + (Lw * Lw - Lww) * f;
  const cplx res = gww + (h.gamma / w + h.delta / (w - 1.0) + h.epsilon / (w - h.t)) * gw +
                   (h.alpha * h.beta * w - h.q) / (w * (w - 1.0) * (w - h.t)) * g;
  const double scale = std::abs(gww) + std::abs(h.gamma / w * gw) + std::abs(h.q / (w * (w - 1.0) * (w - h.t)) * g);
  return res / scale;
}

}  // namespace

TEST_CASE("parameters for (0,0,0,1)") {
  const auto ctx = make_context(cplx(0, 2));
  const auto h = ino_to_heun(normalize({0, 0, 0, 1}), 0.0, ctx);
  CHECK(std::abs(h.alpha - 2.5) < 1e-15);
  CHECK(std::abs(h.beta - 1.0) < 1e-15);
  CHECK(std::abs(h.gamma - 1.5) < 1e-15);
  CHECK(std::abs(h.delta - 1.5) < 1e-15);
  CHECK(std::abs(h.epsilon - 1.5) < 1e-15);
  CHECK(std::abs(h.t * h.a - 1.0) < 1e-15);
}

TEST_CASE("Fuchs relation and round trip") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> li(0, 4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (cplx tau : {cplx(0, 1.1), cplx(0.4, 0.9), cplx(-1.3, 1.7)}) {
    const auto ctx = make_context(tau);
    for (int k = 0; k < 20; ++k) {
      std::array<int, 4> lv{li(rng), li(rng), li(rng), li(rng)};
      if (lv == std::array<int, 4>{0, 0, 0, 0}) lv[3] = 1;
      const auto l = normalize(lv);
      const cplx E(30 * u(rng), 30 * u(rng));
      const auto h = ino_to_heun(l, E, ctx);
      CHECK(std::abs(h.gamma + h.delta + h.epsilon - h.alpha - h.beta - 1.0) < 1e-10);
      const auto back = heun_to_ino(h, ctx);
      CHECK(back.l.l == l.l);
      CHECK(std::abs(back.E - E) < 1e-10 * std::max(1.0, std::abs(E)));
      CHECK(std::abs(heun_energy(h.q, l, ctx) - E) < 1e-10 * std::max(1.0, std::abs(E)));
    }
  }
}

TEST_CASE("inverse map on the half-integer class") {
  const auto ctx = make_context(cplx(0.2, 1.3));
  auto h = ino_to_heun(normalize({0, 0, 0, 1}), 2.0, ctx);
  h.gamma = 0.5;  // l0 = -1
  h.alpha -= 0.5;
  h.beta -= 0.5;
  CHECK(heun_to_ino(h, ctx).l.l == std::array<int, 4>{0, 0, 0, 1});

  auto bad = ino_to_heun(normalize({1, 0, 0, 1}), 0.0, ctx);
  bad.gamma = 1.0;
  CHECK_THROWS_AS(heun_to_ino(bad, ctx), DomainError);
  bad = ino_to_heun(normalize({1, 0, 0, 1}), 0.0, ctx);
  bad.alpha += 1.0;
  CHECK_THROWS_AS(heun_to_ino(bad, ctx), DomainError);
  bad = ino_to_heun(normalize({1, 0, 0, 1}), 0.0, ctx);
  bad.t += 0.1;
  CHECK_THROWS_AS(heun_to_ino(bad, ctx), DomainError);
  auto l3 = ino_to_heun(normalize({0, 0, 0, 1}), 0.0, ctx);
  CHECK(std::abs(l3.alpha - l3.beta - 1.5) < 1e-15);
}

TEST_CASE("solutions map to solutions of the Heun equation") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  for (cplx tau : {cplx(0, 1.2), cplx(0.35, 0.95)}) {
    const auto ctx = make_context(tau);
    for (auto lv : std::vector<std::array<int, 4>>{{0, 0, 0, 1}, {2, 1, 0, 0}, {1, 2, 3, 1}, {3, 0, 1, 2}}) {
      const auto l = normalize(lv);
      for (int k = 0; k < 4; ++k) {
        const cplx E(20 * u(rng), 20 * u(rng));
        const cplx x(0.15 + 0.3 * std::abs(u(rng)), 0.1 + 0.2 * std::abs(u(rng)));
        CHECK(std::abs(heun_residual(l, E, x, 1.0, 0.0, ctx)) < 1e-9);
        CHECK(std::abs(heun_residual(l, E, x, 0.0, 1.0, ctx)) < 1e-9);
      }
    }
  }
}

TEST_CASE("half periods map to the singular points") {
  for (cplx tau : {cplx(0, 1), cplx(0.3, 1.4)}) {
    const auto ctx = make_context(tau);
    const cplx a = ino_to_heun(normalize({0, 0, 0, 1}), 0.0, ctx).a;
    CHECK(std::abs(heun_variable(cplx(1e-5, 1e-5), ctx)) < 1e-8);
    CHECK(std::abs(heun_variable(0.5, ctx) - 1.0) < 1e-8);
    CHECK(std::abs(heun_variable(0.5 * (tau + 1.0), ctx) - 1.0 / a) < 1e-8);
    CHECK(std::abs(heun_variable(0.5 * tau + 1e-5, ctx)) > 1e6);
  }
}

TEST_CASE("the real period maps to the cycle around 0 and 1") {
  for (cplx tau : {cplx(0, 1), cplx(0.3, 1.4), cplx(1, 2), cplx(-0.4, 0.8)}) {
    const auto ctx = make_context(tau);
    // clockwise for a path above the real axis, counterclockwise below
    CHECK(cycle_winding_numbers(cplx(0, 0.02), ctx) == std::array<int, 3>{-1, -1, 0});
    CHECK(cycle_winding_numbers(cplx(0.1, -0.03), ctx) == std::array<int, 3>{1, 1, 0});
  }
}

TEST_CASE("scaled curve polynomials") {
  const auto ctx = make_context(cplx(0.25, 1.15));
  for (auto lv : std::vector<std::array<int, 4>>{{0, 0, 0, 1}, {2, 1, 0, 0}, {1, 1, 1, 1}}) {
    const auto l = normalize(lv);
    const auto curve = compute_spectral_curve(compute_xi(l, ctx), ctx);
    const auto [Qt, Q1t] = heun_curve(curve, l, ctx);
    CHECK(std::abs(Qt.leading() - 1.0) < 1e-12);
    CHECK(std::abs(Q1t.leading() - 1.0) < 1e-12);
    const cplx k = 4.0 * (ctx.e(3) - ctx.e(2));
    const double size = std::abs(heun_energy(0.0, l, ctx)) + ctx.energy_scale();
    for (double re = -20; re <= 20; re += 5)
      for (double im : {-3.0, 0.0, 4.0}) {
        const cplx E(re, im);
        const cplx q = heun_accessory(E, l, ctx);
        CHECK(std::abs(curve.Q(E) - std::pow(k, curve.Q.degree()) * Qt(q)) <
              1e-10 * std::pow(std::abs(E) + size, curve.Q.degree()));
        CHECK(std::abs(curve.Q1(E) - std::pow(k, curve.Q1.degree()) * Q1t(q)) <
              1e-10 * std::pow(std::abs(E) + size, curve.Q1.degree()));
      }
  }
}

TEST_CASE("cycle monodromy eigenvalues") {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (cplx tau : {cplx(0, 1.5), cplx(0.3, 1.1)}) {
    const auto ctx = make_context(tau);
    for (auto lv : std::vector<std::array<int, 4>>{{0, 0, 0, 1}, {1, 2, 0, 1}, {2, 1, 0, 0}}) {
      const auto l = normalize(lv);
      const auto xi = compute_xi(l, ctx);
      const auto curve = compute_spectral_curve(xi, ctx);
      const auto [Qt, Q1t] = heun_curve(curve, l, ctx);
      const double parity = (l[0] + l[1]) % 2 == 0 ? 1.0 : -1.0;
      for (int k = 0; k < 4; ++k) {
        const cplx E(15 * u(rng), 15 * u(rng));
        const auto cm = cycle_monodromy_eigenvalues(heun_accessory(E, l, ctx), l, curve, xi, ctx);
        CHECK(std::abs(cm.E_star - E) < 1e-10 * std::max(1.0, std::abs(E)));
        CHECK(std::abs(cm.eigenvalues[0] * cm.eigenvalues[1] - 1.0) < 1e-12);
        // the same integral taken directly in q
        const auto ai = abelian_integral(Q1t, Qt, cm.q0, cm.q_star, 1e-2 * std::abs(cm.q0) + 1e-3);
        const cplx lam = parity * cm.sign0 * std::exp(std::sqrt(ctx.e(3) - ctx.e(2)) * ai.value);
        const double d = std::min(std::abs(lam - cm.eigenvalues[0]), std::abs(lam - cm.eigenvalues[1]));
        CHECK(d < 1e-7 * std::abs(lam));
        // and the real-period multiplier found by integrating in x
        const cplx B = direct_multiplier(E, xi, curve, ctx).multiplier;
        const double e = std::min(std::abs(parity * B - cm.eigenvalues[0]), std::abs(parity * B - cm.eigenvalues[1]));
        CHECK(e < 1e-6 * std::abs(B));
      }
      // approaching q0 the eigenvalues tend to +-(-1)^(l0+l1) like sqrt(q - q0)
      const auto base = cycle_monodromy_eigenvalues(0.3, l, curve, xi, ctx);
      const cplx E0 = heun_energy(base.q0, l, ctx);
      const double s = ctx.energy_scale();
      double dev[2];
      for (int j = 0; j < 2; ++j) {
        const cplx E = E0 + (j == 0 ? 1e-3 : 1e-5) * s * cplx(1, 1);
        const auto near = cycle_monodromy_eigenvalues(heun_accessory(E, l, ctx), l, curve, xi, ctx);
        dev[j] = std::abs(near.eigenvalues[0] - parity * near.sign0);
        CHECK(near.sign0 == base.sign0);
      }
      CHECK(dev[0] < 0.2);
      CHECK(dev[1] / dev[0] == doctest::Approx(0.1).epsilon(0.05));
      CHECK_THROWS_AS(cycle_monodromy_eigenvalues(heun_accessory(curve.roots.back(), l, ctx), l, curve, xi, ctx),
                      DomainError);
    }
  }
}
