#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fingap/elliptic.hpp"
#include "oracles.hpp"

using namespace fingap;

namespace {

const cplx kTaus[] = {cplx(0, 1), cplx(0.3, 1.1), cplx(0, 2), cplx(-0.45, 0.8), cplx(1, 2)};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("context constants") {
  for (cplx tau : kTaus) {
    auto ctx = make_context(tau);
    CHECK(std::abs(ctx.nome()) < 1.0);
    CHECK(std::abs(ctx.e(1) + ctx.e(2) + ctx.e(3)) < 1e-11 * ctx.energy_scale());
    CHECK(std::abs(ctx.eta(1) + ctx.eta(2) + ctx.eta(3)) < 1e-20 + 1e-12 * ctx.energy_scale());
    for (int i = 1; i <= 3; ++i) CHECK(rel(wp(ctx.half_period(i), ctx), ctx.e(i)) < 1e-11);
    // theta-constant forms of e_i
    const cplx t2 = std::pow(ctx.theta_zero(2), 4), t4 = std::pow(ctx.theta_zero(4), 4);
    CHECK(rel(ctx.e(1), pi * pi / 3.0 * (t2 + 2.0 * t4)) < 1e-11);
    CHECK(rel(ctx.e(2), pi * pi / 3.0 * (t2 - t4)) < 1e-11);
    CHECK(rel(ctx.e(3), -pi * pi / 3.0 * (2.0 * t2 + t4)) < 1e-11);
    // Legendre relation through zeta values
    CHECK(rel(zeta_w(0.5, ctx), ctx.eta1()) < 1e-11);
    CHECK(rel(zeta_w(tau / 2.0, ctx), ctx.eta3()) < 1e-11);
  }
}

TEST_CASE("square lattice is lemniscatic") {
  auto ctx = make_context(cplx(0, 1));
  CHECK(std::abs(ctx.g3()) < 1e-11 * std::abs(ctx.g2()));
  CHECK(std::abs(ctx.e(2)) < 1e-11);
  CHECK(std::abs(ctx.e(2) - oracle::wp_lattice(ctx.half_period(2), ctx.tau())) < 1e-10);
}

TEST_CASE("rejects bad inputs") {
  CHECK_THROWS_AS(make_context(cplx(0.3, 0.0)), DomainError);
  CHECK_THROWS_AS(make_context(cplx(0.3, -1.0)), DomainError);
  CHECK_THROWS_AS(make_context(cplx(0, 1), 4), DomainError);
  CHECK_THROWS_AS(make_context(cplx(0, 0.02), 8), NumericalError);
  auto adaptive = make_context_adaptive(cplx(0, 0.05));
  CHECK(adaptive.trunc_order() > 64);
  auto ctx = make_context(cplx(0, 1));
  CHECK_THROWS_AS(wp(cplx(1e-10, 0), ctx), DomainError);
  CHECK_THROWS_AS(wp(cplx(2.0, 1.0), ctx), DomainError);
  CHECK_THROWS_AS(zeta_w(ctx.tau(), ctx), DomainError);
  CHECK_THROWS_AS(co_wp(2, cplx(-1, -3), ctx), DomainError);
  CHECK(std::abs(sigma_w(cplx(0, 0), ctx)) < 1e-14);
}

TEST_CASE("symmetries and periodicity") {
  for (cplx tau : kTaus) {
    auto ctx = make_context(tau);
    for (cplx z : oracle::cell_points(tau, 100, 7)) {
      CHECK(rel(wp(-z, ctx), wp(z, ctx)) < 1e-10);
      CHECK(rel(wp(z + 1.0, ctx), wp(z, ctx)) < 1e-10);
      CHECK(rel(wp(z - 3.0 * tau + 2.0, ctx), wp(z, ctx)) < 1e-10);
      CHECK(rel(zeta_w(z + 1.0, ctx), zeta_w(z, ctx) + 2.0 * ctx.eta1()) < 1e-10);
      CHECK(rel(zeta_w(z + tau, ctx), zeta_w(z, ctx) + 2.0 * ctx.eta3()) < 1e-10);
      CHECK(rel(wp_prime(-z, ctx), -wp_prime(z, ctx)) < 1e-10);
    }
  }
}

TEST_CASE("algebraic identities") {
  for (cplx tau : kTaus) {
    auto ctx = make_context(tau);
    for (cplx z : oracle::cell_points(tau, 100, 11)) {
      const cplx w = wp(z, ctx), wd = wp_prime(z, ctx);
      const cplx rhs = 4.0 * (w - ctx.e(1)) * (w - ctx.e(2)) * (w - ctx.e(3));
      CHECK(std::abs(wd * wd - rhs) < 1e-9 * std::max(1.0, std::abs(rhs)));
      CHECK(rel(w * w, wp_second(z, ctx) / 6.0 + ctx.g2() / 12.0) < 1e-10);
      for (int i = 1; i <= 3; ++i) {
        const cplx c = co_wp(i, z, ctx);
        CHECK(rel(c * c, w - ctx.e(i)) < 1e-10);
        CHECK(rel(c, co_sigma(i, z, ctx) / sigma_w(z, ctx)) < 1e-10);
        const int j = i % 3 + 1, k = (i + 1) % 3 + 1;
        const cplx shifted = ctx.e(i) + (ctx.e(i) - ctx.e(j)) * (ctx.e(i) - ctx.e(k)) / (w - ctx.e(i));
        CHECK(rel(wp(z + ctx.half_period(i), ctx), shifted) < 1e-10);
      }
      CHECK(rel(wd, -2.0 * co_wp(1, z, ctx) * co_wp(2, z, ctx) * co_wp(3, z, ctx)) < 1e-10);
    }
  }
}

TEST_CASE("zeta and sigma are consistent") {
  auto ctx = make_context(cplx(0.3, 1.1));
  for (cplx z : oracle::cell_points(ctx.tau(), 20, 3)) {
    const double h = 1e-4;
    const cplx dlog = (std::log(sigma_w(z + h, ctx)) - std::log(sigma_w(z - h, ctx))) / (2.0 * h);
    CHECK(std::abs(dlog - zeta_w(z, ctx)) < 1e-6 * std::max(1.0, std::abs(zeta_w(z, ctx))));
    const cplx dz = (zeta_w(z + h, ctx) - zeta_w(z - h, ctx)) / (2.0 * h);
    CHECK(std::abs(dz + wp(z, ctx)) < 1e-6 * std::max(1.0, std::abs(wp(z, ctx))));
    // quasi-periodicity of sigma and co-sigma across many cells
    const cplx shift = 2.0 - 3.0 * ctx.tau();
    const cplx lhs = sigma_w(z + shift, ctx);
    const cplx eta = 2.0 * ctx.eta1() - 3.0 * ctx.eta3();
    const cplx rhs = -std::exp(2.0 * eta * (z + shift / 2.0)) * sigma_w(z, ctx);
    CHECK(std::abs(lhs - rhs) < 1e-9 * std::abs(rhs));
    for (int i = 1; i <= 3; ++i)
      CHECK(rel(co_sigma(i, z + shift, ctx) / sigma_w(z + shift, ctx), co_wp(i, z + shift, ctx)) < 1e-9);
  }
}

TEST_CASE("co-wp sign pattern under periods") {
  auto ctx = make_context(cplx(0.2, 1.3));
  const cplx z(0.31, 0.27);
  const int s1[] = {1, -1, -1}, s3[] = {-1, -1, 1};
  for (int i = 1; i <= 3; ++i) {
    CHECK(rel(co_wp(i, z + 1.0, ctx), double(s1[i - 1]) * co_wp(i, z, ctx)) < 1e-11);
    CHECK(rel(co_wp(i, z + ctx.tau(), ctx), double(s3[i - 1]) * co_wp(i, z, ctx)) < 1e-11);
  }
  // wp_i(z) ~ 1/z near the origin
  CHECK(std::abs(co_wp(1, cplx(1e-3, 0), ctx) * 1e-3 - 1.0) < 1e-5);
}

TEST_CASE("lattice-sum oracle agrees on a grid") {
  for (cplx tau : {cplx(0, 1), cplx(0.3, 1.1)}) {
    auto ctx = make_context(tau);
    for (int a = 0; a < 10; ++a)
      for (int b = 0; b < 10; ++b) {
        const cplx z = (a + 0.5) / 10.0 + (b + 0.37) / 10.0 * tau;
        CHECK(rel(wp(z, ctx), oracle::wp_lattice(z, tau)) < 1e-8);
      }
  }
}

TEST_CASE("trigonometric limit") {
  auto ctx = make_context(cplx(0, 8));
  for (int k = 0; k < 100; ++k) {
    const double x = 0.1 + 0.8 * (k + 0.5) / 100.0;
    const double s = std::sin(pi * x);
    CHECK(std::abs(wp(x, ctx) - (-pi * pi / 3.0 + pi * pi / (s * s))) < 1e-6);
  }
}

TEST_CASE("jets match derivatives") {
  auto ctx = make_context(cplx(0.3, 1.1));
  const cplx z0(0.23, 0.31);
  const auto j = wp_jet(z0, 12, ctx);
  CHECK(rel(j.deriv(1), wp_prime(z0, ctx)) < 1e-12);
  CHECK(rel(j.deriv(2), wp_second(z0, ctx)) < 1e-12);
  const cplx t(0.05, -0.03);
  CHECK(rel(j.eval(t), wp(z0 + t, ctx)) < 1e-9);
  const auto cj = co_wp_jets(z0, 12, ctx);
  for (int i = 0; i < 3; ++i) {
    CHECK(rel(cj[i].eval(t), co_wp(i + 1, z0 + t, ctx)) < 1e-9);
    const auto sq = cj[i] * cj[i];
    CHECK(rel(sq.eval(t), j.eval(t) - ctx.e(i + 1)) < 1e-9);
  }
}

TEST_CASE("large imaginary arguments do not overflow") {
  auto ctx = make_context(cplx(0.1, 0.9));
  const cplx z(0.2, 40.3);
  CHECK(std::isfinite(std::abs(wp(z, ctx))));
  CHECK(rel(wp(z, ctx), wp(reduce(z, ctx).z0, ctx)) < 1e-12);
  CHECK(std::isfinite(std::abs(co_wp(2, z, ctx))));
}
