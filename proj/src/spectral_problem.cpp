#include "fingap/spectral_problem.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>

#include "fingap/invariant_space.hpp"
#include "fingap/ode.hpp"

namespace fingap {

namespace {

constexpr double kLatticeTol = 1e-12;

double q_scale(const SpectralCurve& c, const EllipticContext& ctx) {
  return std::pow(ctx.energy_scale(), c.Q.degree());
}

/// Lattice offset and spacing (in units of 2 pi i) for the admissible J.
std::pair<int, int> lattice_of(const SpectralSetup& s) {
  if (s.cls.tag != BoundaryTag::D) return {0, 1};
  const int offset = s.l[0] + s.l[1] + (s.sign0 == 1 ? 0 : 1);
  return {offset, 2};
}

cplx nearest_lattice_point(cplx J, const SpectralSetup& s) {
  const auto [offset, spacing] = lattice_of(s);
  const double t = J.imag() / (2.0 * pi) - offset;
  const double k = std::round(t / spacing);
  return cplx(0.0, 2.0 * pi * (offset + spacing * k));
}

/// u(w_a + y) minus its double pole, as a Taylor series in y.
CJet regular_potential_part(const CouplingVector& l, int a, int order, const EllipticContext& ctx) {
  CJet v = CJet::zero(order);
  const CJet sq = wp_square_jet(order + 2, ctx);
  if (l[a] > 0) {
    CJet::Coeffs c = CJet::Coeffs::Zero(order + 1);
    for (int k = 0; k <= order; ++k) c(k) = sq[k + 2];
    v += cplx(double(l[a] * (l[a] + 1))) * CJet(c);
  }
  for (int i = 0; i < 4; ++i) {
    if (i == a || l[i] == 0) continue;
    v += cplx(double(l[i] * (l[i] + 1))) * wp_jet(ctx.half_period(i) + ctx.half_period(a), order, ctx);
  }
  return v;
}

/// The solution y^(l_a + 1) (1 + O(y^2)) at w_a, evaluated at w_a + y.
SolutionState frobenius_solution(const CouplingVector& l, int a, cplx E, cplx y, const EllipticContext& ctx) {
  constexpr int N = 120;
  const CJet v = regular_potential_part(l, a, N, ctx);
  const int la = l[a];
  const int rho = la + 1;
  std::vector<cplx> c(N + 1, 0.0);
  c[0] = 1.0;
  cplx f = 0.0, df = 0.0, yn = 1.0;
  double last = INFINITY;
  for (int n = 0; n <= N; ++n) {
    if (n >= 2) {
      cplx acc = 0.0;
      for (int k = 0; k <= n - 2; ++k) acc += (v[k] - (k == 0 ? E : cplx(0.0))) * c[n - 2 - k];
      c[n] = acc / double(n * (n + 2 * la + 1));
    }
    f += c[n] * yn;
    df += double(n + rho) * c[n] * yn;
    const double term = std::abs(c[n] * yn);
    if (n > 10 && term < 1e-18 * std::abs(f) && last < 1e-18 * std::abs(f)) break;
    last = term;
    yn *= y;
  }
  if (last > 1e-12 * std::abs(f)) throw NumericalError("regularity_mismatch: Frobenius series did not converge");
  const cplx yr = std::pow(y, rho);
  return {ctx.half_period(a) + y, f * yr, df * yr / y};
}

}  // namespace

BoundaryClass boundary_class(const CouplingVector& l) {
  BoundaryClass c;
  c.ground_sin = l[0] + 1;
  c.ground_cos = l[1] + 1;
  if (l[0] >= 1 && l[1] >= 1) {
    c.tag = BoundaryTag::D;
    c.target_multipliers = {(l[0] + l[1]) % 2 == 0 ? 1 : -1};
  } else if (l[0] == 0 && l[1] == 0) {
    c.tag = BoundaryTag::DstarStar;
    c.target_multipliers = {1, -1};
  } else {
    c.tag = BoundaryTag::Dstar;
    c.target_multipliers = {1, -1};
  }
  return c;
}

std::string tag_name(BoundaryTag t) {
  switch (t) {
    case BoundaryTag::D: return "D";
    case BoundaryTag::Dstar: return "D*";
    case BoundaryTag::DstarStar: return "D**";
  }
  return "?";
}

double trig_eigenvalue(int m, const CouplingVector& l) {
  if (m < 0) throw DomainError("trig_eigenvalue: m must be nonnegative");
  double k = 0;
  switch (boundary_class(l).tag) {
    case BoundaryTag::D: k = 2 * m + l[0] + l[1] + 2; break;
    case BoundaryTag::Dstar: k = m + std::max(l[0], l[1]) + 1; break;
    case BoundaryTag::DstarStar: k = m; break;
  }
  return pi * pi * k * k - pi * pi / 3.0 * l.weight();
}

cplx tau_from_nome(cplx p) {
  if (std::abs(p) == 0.0 || std::abs(p) >= 1.0) throw DomainError("tau_from_nome: need 0 < |p| < 1");
  return std::log(p) / (I * pi);
}

SpectralSetup make_spectral_setup(const CouplingVector& l, const EllipticContext& ctx) {
  SpectralSetup s{l, ctx, compute_xi(l, ctx), {}, boundary_class(l), 0.0, 1};
  s.curve = compute_spectral_curve(s.xi, ctx);
  double best = -1;
  for (cplx r : s.curve.roots) {
    double d = INFINITY;
    for (cplx q : s.curve.roots)
      if (q != r) d = std::min(d, std::abs(q - r));
    if (d > best) {
      best = d;
      s.E0 = r;
    }
  }
  s.sign0 = base_sign_at_root(s.E0, s.xi, s.curve, ctx);
  return s;
}

EigenconditionValue eigencondition(cplx E, const SpectralSetup& s, std::optional<cplx> lattice_point) {
  if (std::abs(s.curve.Q(E)) < 1e-7 * q_scale(s.curve, s.ctx))
    throw DomainError("eigencondition: Q(E) = 0; eigenvalues at roots of Q come from diagonalizing H on the invariant space");
  const auto ai = abelian_integral(s.curve.Q1, s.curve.Q, s.E0, E, 1e-2 * s.ctx.energy_scale());
  EigenconditionValue v;
  v.integral = ai.value;
  v.derivative = s.curve.Q1(E) / ai.sqrt_end;
  if (lattice_point) {
    // the other sheet reverses J; the lattice is symmetric under J -> -J
    const cplx L = *lattice_point;
    v.lattice_point = std::abs(v.integral - L) <= std::abs(v.integral + L) ? L : -L;
  } else {
    v.lattice_point = nearest_lattice_point(v.integral, s);
  }
  v.residual = v.integral - v.lattice_point;
  return v;
}

NewtonOutcome solve_eigencondition(cplx guess, const SpectralSetup& s, std::optional<cplx> lattice_point, double tol,
                                   int max_iter) {
  NewtonOutcome out;
  out.E = guess;
  auto ev = eigencondition(guess, s, lattice_point);
  const cplx L = lattice_point ? *lattice_point : ev.lattice_point;
  double r = std::abs(ev.residual);
  for (int it = 0; it < max_iter && r > tol; ++it) {
    out.iterations = it + 1;
    const cplx step = ev.residual / ev.derivative;
    double t = 1.0;
    bool improved = false;
    for (int h = 0; h < 12; ++h, t *= 0.5) {
      const cplx E = out.E - t * step;
      EigenconditionValue trial;
      try {
        trial = eigencondition(E, s, L);
      } catch (const DomainError&) {
        continue;
      }
      if (std::abs(trial.residual) < r) {
        out.E = E;
        ev = trial;
        r = std::abs(trial.residual);
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  out.lattice_point = ev.lattice_point;
  out.residual = r;
  out.converged = r < 1e-8;
  return out;
}

std::vector<cplx> nome_path(cplx a, cplx b, int steps) {
  if (steps < 1) throw DomainError("nome_path: steps must be positive");
  std::vector<cplx> out;
  for (int k = 0; k <= steps; ++k) out.push_back(a + (b - a) * (double(k) / steps));
  return out;
}

EigenTrajectory continue_eigenvalue(int m, const CouplingVector& l, const std::vector<cplx>& p_path) {
  EigenTrajectory tr;
  tr.m = m;
  tr.l = l;
  tr.cls = boundary_class(l);
  if (p_path.empty()) return tr;
  if (std::abs(p_path.front()) > 0.05) throw DomainError("continue_eigenvalue: the path must start at |p| <= 0.05");
  const double E_trig = trig_eigenvalue(m, l);

  struct Point {
    cplx p;
    cplx E;
    double residual;
    std::optional<SpectralSetup> setup;
  };
  auto solve_at = [&](cplx p, cplx guess, std::optional<cplx> lattice) -> std::optional<Point> {
    if (p == 0.0) return Point{p, E_trig, 0.0, std::nullopt};
    try {
      auto setup = make_spectral_setup(l, make_context(tau_from_nome(p)));
      if (!lattice) lattice = eigencondition(guess, setup).lattice_point;
      auto nw = solve_eigencondition(guess, setup, lattice);
      if (!nw.converged) return std::nullopt;
      return Point{p, nw.E, nw.residual, std::move(setup)};
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };
  // J at E measured on the lattice of `target`'s setup picks the lattice point to follow
  auto lattice_for = [&](const Point& prev, cplx p) -> std::optional<cplx> {
    if (p == 0.0 || prev.p == 0.0) return std::nullopt;
    try {
      auto setup = make_spectral_setup(l, make_context(tau_from_nome(p)));
      return eigencondition(prev.E, setup).lattice_point;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };

  std::function<std::optional<Point>(const Point&, cplx, int)> advance = [&](const Point& a, cplx pb,
                                                                             int depth) -> std::optional<Point> {
    if (auto r = solve_at(pb, a.E, lattice_for(a, pb))) return r;
    if (depth >= 8) return std::nullopt;
    const cplx mid = 0.5 * (a.p + pb);
    auto m1 = advance(a, mid, depth + 1);
    if (!m1) return std::nullopt;
    return advance(*m1, pb, depth + 1);
  };

  auto record = [&](const Point& pt) {
    EigenSample smp{pt.p, pt.E, pt.residual, false, false};
    if (pt.setup) {
      const auto& c = pt.setup->curve;
      const double es = pt.setup->ctx.energy_scale();
      smp.near_Q_root = std::abs(c.Q(pt.E)) < 1e-4 * std::pow(es, c.Q.degree());
      smp.near_Q1_root = std::abs(c.Q1(pt.E)) < 1e-4 * std::pow(es, c.Q1.degree());
    }
    tr.samples.push_back(smp);
  };

  auto first = solve_at(p_path.front(), E_trig, std::nullopt);
  if (!first) {
    tr.truncated = true;
    tr.diagnostic = "no solution of the eigenvalue condition near the trigonometric value at the first nome";
    return tr;
  }
  record(*first);
  Point cur = *first;
  for (size_t k = 1; k < p_path.size(); ++k) {
    auto next = advance(cur, p_path[k], 0);
    if (!next) {
      tr.truncated = true;
      tr.diagnostic = "continuation stalled between p = " + std::to_string(std::abs(cur.p)) + " and p = " +
                      std::to_string(std::abs(p_path[k])) + " after 8 step halvings (possible singular point)";
      break;
    }
    cur = std::move(*next);
    record(cur);
  }
  return tr;
}

BandStructure band_structure(const CouplingVector& l, const EllipticContext& ctx) {
  if (l[0] != 0 || l[1] != 0) throw DomainError("band_structure: needs l0 = l1 = 0 (no poles on the real line)");
  const double re = ctx.tau().real();
  if (std::abs(re - std::round(re)) > kLatticeTol)
    throw DomainError("band_structure: needs Re tau integral so that the potential is real");
  const auto setup = make_spectral_setup(l, ctx);
  const auto& curve = setup.curve;
  const double es = ctx.energy_scale();
  BandStructure b;
  for (cplx r : curve.roots) {
    if (std::abs(r.imag()) > 1e-8 * es)
      throw NumericalError("band_structure: Q has a non-real root " + std::to_string(r.real()) + "+" +
                           std::to_string(r.imag()) + "i");
    b.edges.push_back(r.real());
  }
  std::sort(b.edges.begin(), b.edges.end());
  const size_t n = b.edges.size();
  const double width = std::max(b.edges.back() - b.edges.front(), 1.0);
  b.gaps.emplace_back(-INFINITY, b.edges[0]);
  for (size_t k = 1; k + 1 < n; k += 2) b.gaps.emplace_back(b.edges[k], b.edges[k + 1]);

  auto modulus = [&](double E) {
    return std::abs(hyperelliptic_multiplier(E, setup.E0, setup.sign0, curve, setup.xi, ctx).multiplier);
  };
  b.smallest_gap_deviation = INFINITY;
  for (const auto& [lo, hi] : b.gaps) {
    const double E = std::isinf(lo) ? hi - 0.5 * width : 0.5 * (lo + hi);
    b.smallest_gap_deviation = std::min(b.smallest_gap_deviation, std::abs(modulus(E) - 1.0));
  }
  for (size_t k = 0; k < n; k += 2) {
    const double E = k + 1 < n ? 0.5 * (b.edges[k] + b.edges[k + 1]) : b.edges[k] + 0.5 * width;
    b.worst_band_deviation = std::max(b.worst_band_deviation, std::abs(modulus(E) - 1.0));
  }
  b.multiplier_check = b.worst_band_deviation < 1e-6 && b.smallest_gap_deviation > 1e-6;
  return b;
}

std::vector<cplx> nonrepeated_eigenvalues(const CouplingVector& l, const EllipticContext& ctx) {
  const auto h = hamiltonian_matrix(build_invariant_space(l), ctx);
  Eigen::ComplexEigenSolver<MatrixXc> es(h.matrix, false);
  std::vector<cplx> ev(es.eigenvalues().begin(), es.eigenvalues().end());
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return ev;
}

cplx regularity_mismatch(cplx E, const CouplingVector& l, const EllipticContext& ctx) {
  double radius = std::min(1.0, ctx.tau().imag());
  for (int a : {0, 1})
    for (int i = 0; i < 4; ++i)
      if (i != a && l[i] > 0)
        radius = std::min(radius, lattice_distance(ctx.half_period(a) - ctx.half_period(i), ctx));
  const double h = std::min(0.1, 0.25 * radius);
  SolutionState left = frobenius_solution(l, 0, E, h, ctx);
  const SolutionState right = frobenius_solution(l, 1, E, -h, ctx);
  left = integrate_solution(l, E, left, right.x, ctx);
  const cplx w = left.f * right.df - left.df * right.f;
  return w / (std::abs(left.f * right.df) + std::abs(left.df * right.f));
}

}  // namespace fingap
