#include "fingap/commuting_operator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fingap {

namespace {

using Op = std::vector<CJet>;

double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

CJet nth_derivative(CJet f, int n) {
  for (int i = 0; i < n; ++i) f = f.derivative();
  return f;
}

// (sum_k p_k D^k) o (sum_m q_m D^m)
Op compose(const Op& p, const Op& q) {
  int order = 1 << 20;
  for (const auto& c : p) order = std::min(order, c.order());
  for (const auto& c : q) order = std::min(order, c.order());
  Op r(p.size() + q.size() - 1, CJet::zero(order));
  for (size_t k = 0; k < p.size(); ++k)
    for (size_t m = 0; m < q.size(); ++m)
      for (size_t i = 0; i <= k; ++i) {
        const CJet term = binom(int(k), int(i)) * (p[k] * nth_derivative(q[m], int(i)));
        r[k - i + m] += term;
      }
  return r;
}

std::vector<SolutionState> random_solutions(const XiExpansion& xi, const EllipticContext& ctx, int trials,
                                            unsigned seed, std::vector<cplx>& energies) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto pts = regular_sample_points(64, seed, ctx);
  const double s = ctx.energy_scale();
  std::vector<SolutionState> out;
  size_t k = 0;
  while (static_cast<int>(out.size()) < trials) {
    if (k + 1 >= pts.size()) throw NumericalError("random_solutions: no pole-free segment found");
    const cplx a = pts[k], b = pts[k + 1];
    k += 2;
    if (segment_pole_distance(xi.coupling, a, b, ctx) < 0.05) continue;
    const cplx E = 3.0 * s * cplx(u(rng), u(rng));
    const SolutionState start{a, cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
    out.push_back(integrate_solution(xi.coupling, E, start, b, ctx));
    energies.push_back(E);
  }
  return out;
}

}  // namespace

VectorXc operator_coeffs(const XiExpansion& xi, cplx x, const EllipticContext& ctx) {
  const int g = xi.g;
  const int order = 2 * g + 4;
  const Op H{potential_jet(xi.coupling, x, order, ctx), CJet::zero(order), CJet::constant(-1.0, order)};
  std::vector<Op> hp{Op{CJet::constant(1.0, order)}};
  for (int n = 1; n <= g; ++n) hp.push_back(compose(H, hp.back()));
  const auto slices = xi_slices(xi, ctx);
  VectorXc c = VectorXc::Zero(2 * g + 2);
  for (int j = 0; j <= g; ++j) {
    const CJet a = slices[j](x, order);
    const Op first{-0.5 * a.derivative(), a.truncated(order - 1)};
    const Op term = compose(first, hp[g - j]);
    for (size_t k = 0; k < term.size(); ++k) c(static_cast<Eigen::Index>(k)) += term[k].value();
  }
  return c;
}

cplx apply_operator(const VectorXc& c, const CJet& f) {
  cplx acc = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) acc += c(k) * f.deriv(static_cast<int>(k));
  return acc;
}

cplx apply_A(const SolutionState& f, cplx E, const XiExpansion& xi, const EllipticContext& ctx) {
  const CJet h = xi_jet(xi, f.x, E, 1, ctx);
  return h.value() * f.df - 0.5 * h.deriv(1) * f.f;
}

double verify_commutator(const XiExpansion& xi, const EllipticContext& ctx, int trials, unsigned seed) {
  if (xi.g < 1) throw DomainError("verify_commutator: genus must be at least 1");
  std::vector<cplx> energies;
  const auto sols = random_solutions(xi, ctx, trials, seed, energies);
  double worst = 0;
  for (size_t t = 0; t < sols.size(); ++t) {
    const cplx E = energies[t];
    const CJet f = solution_jet(xi.coupling, E, sols[t], 4, ctx);
    const CJet h = xi_jet(xi, sols[t].x, E, 3, ctx);
    const CJet v = potential_jet(xi.coupling, sols[t].x, 2, ctx) - E;
    const CJet af = h.truncated(2) * f.derivative().truncated(2) - 0.5 * (h.derivative().truncated(2) * f.truncated(2));
    const cplx res = -af.deriv(2) + v.value() * af.value();
    const double scale = std::abs(af.deriv(2)) + std::abs(v.value() * af.value());
    worst = std::max(worst, std::abs(res) / scale);
  }
  return worst;
}

double algebraic_relation_check(const XiExpansion& xi, const SpectralCurve& curve, const EllipticContext& ctx,
                                int trials, unsigned seed) {
  std::vector<cplx> energies;
  const auto sols = random_solutions(xi, ctx, trials, seed, energies);
  double worst = 0;
  for (size_t t = 0; t < sols.size(); ++t) {
    const cplx E = energies[t];
    const CJet f = solution_jet(xi.coupling, E, sols[t], 3, ctx);
    const CJet h = xi_jet(xi, sols[t].x, E, 3, ctx);
    const CJet af = h.truncated(2) * f.derivative() - 0.5 * (h.derivative() * f.truncated(2));
    const cplx a2f = h.value() * af.deriv(1) - 0.5 * h.deriv(1) * af.value();
    const cplx qf = curve.Q(E) * f.value();
    const double scale = std::abs(h.value() * af.deriv(1)) + std::abs(0.5 * h.deriv(1) * af.value()) + std::abs(qf);
    worst = std::max(worst, std::abs(a2f + qf) / scale);
  }
  return worst;
}

VectorXc determinant_operator_coeffs(const InvariantBasis& basis, cplx x, const EllipticContext& ctx) {
  std::vector<CJet> fs;
  const int n = basis.dim;
  for (const auto& b : basis.blocks)
    for (const auto& e : b.elements) fs.push_back(basis_jet(e, x, n, ctx));
  MatrixXc m(n + 1, n);
  for (int r = 0; r <= n; ++r)
    for (int i = 0; i < n; ++i) m(r, i) = fs[i].deriv(r);
  // equilibrate, then undo the scales on each cofactor
  double log_cols = 0;
  for (int i = 0; i < n; ++i) {
    const double s = m.col(i).cwiseAbs().maxCoeff();
    m.col(i) /= s;
    log_cols += std::log(s);
  }
  Eigen::VectorXd row_scale(n + 1);
  for (int r = 0; r <= n; ++r) {
    row_scale(r) = m.row(r).cwiseAbs().maxCoeff();
    m.row(r) /= row_scale(r);
  }
  const double log_total = log_cols + row_scale.array().log().sum();
  VectorXc c(n + 1);
  for (int r = 0; r <= n; ++r) {
    MatrixXc minor(n, n);
    for (int rr = 0, k = 0; rr <= n; ++rr)
      if (rr != r) minor.row(k++) = m.row(rr);
    c(r) = ((r + n) % 2 ? -1.0 : 1.0) * Eigen::FullPivLU<MatrixXc>(minor).determinant() *
           std::exp(log_total - std::log(row_scale(r)));
  }
  return c;
}

DeterminantComparison compare_determinant_formula(const XiExpansion& xi, const EllipticContext& ctx,
                                                  bool conjecture_mode) {
  const auto& l = xi.coupling;
  const int zeros = int(l[0] == 0) + int(l[1] == 0) + int(l[2] == 0) + int(l[3] == 0);
  DeterminantComparison out;
  out.proven_case = zeros >= 2;
  if (!out.proven_case && !conjecture_mode)
    throw DomainError("compare_determinant_formula: " + l.str() + " has fewer than two zero couplings");
  const auto basis = build_invariant_space(l);
  if (basis.dim != 2 * xi.g + 1)
    throw DomainError("compare_determinant_formula: dim V = " + std::to_string(basis.dim) + " is not 2g+1");
  const double sign = xi.g % 2 ? -1.0 : 1.0;
  for (cplx x : regular_sample_points(24, 7, ctx)) {
    VectorXc d = determinant_operator_coeffs(basis, x, ctx);
    const double big = d.cwiseAbs().maxCoeff();
    if (!(std::abs(d(d.size() - 1)) > 1e-10 * big)) continue;
    const cplx lead = sign * d(d.size() - 1);
    d *= 1.0 / lead;
    const VectorXc a = operator_coeffs(xi, x, ctx);
    const double ref = a.cwiseAbs().maxCoeff();
    out.max_difference = std::max(out.max_difference, (d - a).cwiseAbs().maxCoeff() / ref);
    const Eigen::Index sub = 2 * xi.g;
    out.subleading = std::max({out.subleading, std::abs(a(sub)) / ref, std::abs(d(sub)) / ref});
    if (out.samples == 0)
      out.scale = lead;
    else
      out.scale_spread = std::max(out.scale_spread, std::abs(lead - out.scale) / std::abs(out.scale));
    if (++out.samples == 6) break;
  }
  if (out.samples < 6) throw NumericalError("compare_determinant_formula: too many singular samples");
  return out;
}

double invariant_space_annihilation(const XiExpansion& xi, const EllipticContext& ctx) {
  const auto basis = build_invariant_space(xi.coupling);
  const int order = 2 * xi.g + 1;
  double worst = 0;
  for (cplx x : regular_sample_points(6, 11, ctx)) {
    const VectorXc c = operator_coeffs(xi, x, ctx);
    for (const auto& b : basis.blocks)
      for (const auto& e : b.elements) {
        const CJet f = basis_jet(e, x, order, ctx);
        double mag = 0;
        for (int k = 0; k <= order; ++k) mag += std::abs(c(k) * f.deriv(k));
        worst = std::max(worst, std::abs(apply_operator(c, f)) / mag);
      }
  }
  return worst;
}

}  // namespace fingap
