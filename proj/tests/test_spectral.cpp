#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fingap/spectral_problem.hpp"
#include "galerkin.hpp"

using namespace fingap;

TEST_CASE("boundary classes") {
  CHECK(boundary_class(normalize({1, 1, 0, 0})).tag == BoundaryTag::D);
  CHECK(boundary_class(normalize({2, 1, 3, 0})).target_multipliers == std::vector<int>{-1});
  CHECK(boundary_class(normalize({2, 2, 0, 0})).target_multipliers == std::vector<int>{1});
  CHECK(boundary_class(normalize({1, 0, 0, 2})).tag == BoundaryTag::Dstar);
  CHECK(boundary_class(normalize({0, 1, 0, 0})).tag == BoundaryTag::Dstar);
  CHECK(boundary_class(normalize({0, 0, 0, 1})).tag == BoundaryTag::DstarStar);
  CHECK(boundary_class(normalize({-2, 0, 0, 1})).tag == BoundaryTag::Dstar);
  const auto c = boundary_class(normalize({2, 1, 0, 0}));
  CHECK(c.ground_sin == 3);
  CHECK(c.ground_cos == 2);
}

TEST_CASE("trigonometric eigenvalues") {
  const double p2 = pi * pi;
  CHECK(trig_eigenvalue(0, normalize({1, 1, 0, 0})) == doctest::Approx(16 * p2 - 4 * p2 / 3).epsilon(1e-15));
  CHECK(trig_eigenvalue(0, normalize({1, 0, 0, 0})) == doctest::Approx(4 * p2 - 2 * p2 / 3).epsilon(1e-15));
  CHECK(trig_eigenvalue(0, normalize({0, 0, 0, 1})) == doctest::Approx(-2 * p2 / 3).epsilon(1e-15));
  CHECK(trig_eigenvalue(2, normalize({1, 1, 0, 0})) == doctest::Approx(64 * p2 - 4 * p2 / 3).epsilon(1e-15));
  CHECK_THROWS_AS(trig_eigenvalue(-1, normalize({1, 1, 0, 0})), DomainError);
}

TEST_CASE("nome and tau") {
  for (cplx p : {cplx(1e-6), cplx(0.15), cplx(-0.2), cplx(0.1, 0.05)}) {
    const auto ctx = make_context(tau_from_nome(p));
    CHECK(std::abs(ctx.nome() - p) < 1e-15);
  }
  CHECK_THROWS_AS(tau_from_nome(0.0), DomainError);
  CHECK_THROWS_AS(tau_from_nome(1.0), DomainError);
}

TEST_CASE("continued eigenvalues approach the trigonometric limit") {
  const auto l = normalize({1, 1, 0, 0});
  for (int m = 0; m <= 3; ++m) {
    const auto tr = continue_eigenvalue(m, l, {cplx(1e-6)});
    REQUIRE(tr.samples.size() == 1);
    CHECK(std::abs(tr.samples[0].E - trig_eigenvalue(m, l)) < 1e-4);
    CHECK(tr.samples[0].residual < 1e-8);
  }
}

TEST_CASE("zero nome path is constant") {
  const auto l = normalize({2, 1, 0, 0});
  const auto tr = continue_eigenvalue(1, l, {0.0, 0.0, 0.0});
  REQUIRE(tr.samples.size() == 3);
  for (const auto& s : tr.samples) CHECK(s.E == cplx(trig_eigenvalue(1, l)));
  CHECK_THROWS_AS(continue_eigenvalue(0, l, {cplx(0.2)}), DomainError);
}

TEST_CASE("continuation agrees with a Fourier-Galerkin eigensolve") {
  const auto l = normalize({1, 1, 0, 0});
  const auto path = nome_path(1e-6, 0.15, 15);
  const auto ev = oracle::galerkin_eigenvalues(l, make_context(tau_from_nome(0.15)));
  for (int m = 0; m <= 1; ++m) {
    const auto tr = continue_eigenvalue(m, l, path);
    REQUIRE_FALSE(tr.truncated);
    REQUIRE(tr.samples.size() == path.size());
    for (const auto& s : tr.samples) {
      CHECK(s.residual < 1e-8);
      CHECK(std::abs(s.E.imag()) < 1e-8);
      CHECK_FALSE(s.near_Q_root);
    }
    CHECK(std::abs(tr.samples.back().E - ev[m]) < 1e-5);
  }
}

TEST_CASE("Galerkin oracle at the trigonometric limit") {
  for (auto lv : std::vector<std::array<int, 4>>{{1, 1, 0, 0}, {2, 1, 0, 0}, {1, 2, 1, 0}}) {
    const auto l = normalize(lv);
    const auto ev = oracle::galerkin_eigenvalues(l, make_context(tau_from_nome(1e-8)), 64, 256);
    for (int m = 0; m < 3; ++m) CHECK(std::abs(ev[m] - trig_eigenvalue(m, l)) < 1e-5);
  }
}

TEST_CASE("eigenfunctions are regular at both ends") {
  const auto l = normalize({2, 1, 0, 1});
  const auto ctx = make_context(tau_from_nome(0.05));
  const auto path = nome_path(1e-6, 0.05, 4);
  for (int m = 0; m <= 2; ++m) {
    const auto tr = continue_eigenvalue(m, l, path);
    REQUIRE_FALSE(tr.truncated);
    const cplx E = tr.samples.back().E;
    CHECK(std::abs(regularity_mismatch(E, l, ctx)) < 1e-9);
    CHECK(std::abs(regularity_mismatch(E + 0.5, l, ctx)) > 1e-5);
  }
}

TEST_CASE("gauge potential is bounded at the singular points") {
  const auto ctx = make_context(tau_from_nome(0.1));
  const auto l = normalize({2, 1, 0, 0});
  auto gauge = [&](double x) {
    const double s = std::sin(pi * x), c = std::cos(pi * x);
    const double phi_ratio = pi * pi * (6.0 / (s * s) + 2.0 / (c * c) - 25.0);
    return potential(l, x, ctx) - phi_ratio;
  };
  for (double x0 : {0.0, 0.5}) {
    const cplx a = gauge(x0 + 1e-3), b = gauge(x0 + 1e-4);
    CHECK(std::abs(a) < 1e3);
    CHECK(std::abs(a - b) < 1e-2);
  }
}

TEST_CASE("eigencondition rejects roots of Q and misses at generic E") {
  const auto setup = make_spectral_setup(normalize({1, 1, 0, 0}), make_context(tau_from_nome(0.1)));
  for (cplx r : setup.curve.roots) CHECK_THROWS_AS(eigencondition(r, setup), DomainError);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 5; ++k) {
    const cplx E(200 + 100 * u(rng), 20 * u(rng));
    const auto ev = eigencondition(E, setup);
    CHECK(std::abs(ev.residual) > 1e-3);
    // the derivative is that of the integral
    const double h = 1e-5;
    const cplx fd = (eigencondition(E + h, setup).integral - eigencondition(E - h, setup).integral) / (2 * h);
    CHECK(std::abs(fd - ev.derivative) < 1e-6 * std::abs(ev.derivative));
  }
}

TEST_CASE("double eigenvalues of (0,0,0,1) stay on the lattice") {
  const auto l = normalize({0, 0, 0, 1});
  const auto path = nome_path(1e-6, 0.2, 8);
  for (int m = 2; m <= 3; ++m) {
    const auto tr = continue_eigenvalue(m, l, path);
    REQUIRE_FALSE(tr.truncated);
    for (const auto& s : tr.samples) {
      CHECK(std::abs(s.E.imag()) < 1e-8);
      CHECK(s.residual < 1e-8);
    }
    CHECK(std::abs(tr.samples.front().E - trig_eigenvalue(m, l)) < 1e-4);
  }
}

TEST_CASE("bands of (0,0,0,1)") {
  const auto l = normalize({0, 0, 0, 1});
  {
    const auto ctx = make_context(cplx(0, 2));
    const auto b = band_structure(l, ctx);
    REQUIRE(b.edges.size() == 3);
    CHECK(std::abs(b.edges[0] + ctx.e(1).real()) < 1e-8);
    CHECK(std::abs(b.edges[1] + ctx.e(2).real()) < 1e-8);
    CHECK(std::abs(b.edges[2] + ctx.e(3).real()) < 1e-8);
    CHECK(b.gaps.size() == 2);
    CHECK(b.multiplier_check);
  }
  {
    const auto ctx = make_context(cplx(1, 2));
    const auto b = band_structure(l, ctx);
    REQUIRE(b.edges.size() == 3);
    CHECK(std::abs(b.edges[0] + ctx.e(1).real()) < 1e-8);
    CHECK(std::abs(b.edges[1] + ctx.e(3).real()) < 1e-8);
    CHECK(std::abs(b.edges[2] + ctx.e(2).real()) < 1e-8);
    CHECK(b.multiplier_check);
  }
  const auto ctx = make_context(cplx(0, 1.3));
  CHECK(band_structure(normalize({0, 0, 1, 0}), ctx).gaps.size() == band_structure(l, ctx).gaps.size());
  const auto b2 = band_structure(normalize({0, 0, 2, 1}), ctx);
  CHECK(b2.edges.size() % 2 == 1);
  CHECK(b2.multiplier_check);
  CHECK_THROWS_AS(band_structure(normalize({1, 0, 0, 1}), ctx), DomainError);
  CHECK_THROWS_AS(band_structure(l, make_context(cplx(0.3, 1.3))), DomainError);
}

TEST_CASE("nonrepeated eigenvalues") {
  const auto ctx = make_context(cplx(0, 1.4));
  const auto ev = nonrepeated_eigenvalues(normalize({0, 0, 0, 1}), ctx);
  REQUIRE(ev.size() == 3);
  for (int i = 1; i <= 3; ++i) {
    double best = INFINITY;
    for (cplx e : ev) best = std::min(best, std::abs(e + ctx.e(i)));
    CHECK(best < 1e-9);
  }
  for (auto lv : std::vector<std::array<int, 4>>{{0, 0, 2, 1}, {0, 0, 1, 3}}) {
    const auto l = normalize(lv);
    const auto e = nonrepeated_eigenvalues(l, ctx);
    const auto curve = compute_spectral_curve(compute_xi(l, ctx), ctx);
    CHECK(int(e.size()) == 2 * curve.genus + 1);
    for (cplx x : e) CHECK(std::abs(curve.Q(x)) < 1e-7 * std::pow(ctx.energy_scale(), curve.Q.degree()));
  }
}
