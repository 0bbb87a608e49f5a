#include "fingap/invariant_space.hpp"

#include <Eigen/SVD>

namespace fingap {

namespace {

// Sign of wp_i under x -> x + 1 and x -> x + tau.
constexpr int kShift1[3] = {1, -1, -1};
constexpr int kShiftTau[3] = {-1, -1, 1};

InvariantBlock make_block(const std::array<int, 4>& alpha) {
  InvariantBlock b;
  b.alpha = alpha;
  const int s = alpha[0] + alpha[1] + alpha[2] + alpha[3];
  if (s / 2 == 1) return b;  // U is the zero space
  b.beta = alpha;
  if (s / 2 >= 2)
    for (int& v : b.beta) v = 1 - v;
  const int d = -(b.beta[0] + b.beta[1] + b.beta[2] + b.beta[3]) / 2;
  for (int i = 0; i < 3; ++i) {
    if (b.beta[i + 1] % 2) {
      b.eps1 *= kShift1[i];
      b.eps3 *= kShiftTau[i];
    }
  }
  for (int n = 0; n <= d; ++n) b.elements.push_back(BasisElement{{b.beta[1], b.beta[2], b.beta[3]}, n});
  return b;
}

cplx collocation_point(double t, const EllipticContext& ctx) {
  return 0.13 + t * (0.74 + 0.11 * ctx.tau());
}

}  // namespace

int invariant_dimension(const CouplingVector& l) {
  const auto k = l.sorted();
  const int s = l.total();
  if (s % 2 == 0) return (k[0] + k[3] >= k[1] + k[2]) ? 2 * k[0] + 1 : k[0] + k[1] + k[2] - k[3] + 1;
  return (k[0] >= k[1] + k[2] + k[3] + 1) ? 2 * k[0] + 1 : s + 2;
}

InvariantBasis build_invariant_space(const CouplingVector& c) {
  if (!c.normalized) throw DomainError("build_invariant_space: coupling vector must be normalized");
  const auto& l = c.l;
  std::array<std::array<int, 4>, 4> alphas;
  if (c.total() % 2 == 0) {
    alphas = {{{-l[0], -l[1], -l[2], -l[3]},
               {-l[0], -l[1], l[2] + 1, l[3] + 1},
               {-l[0], l[1] + 1, -l[2], l[3] + 1},
               {-l[0], l[1] + 1, l[2] + 1, -l[3]}}};
  } else {
    alphas = {{{-l[0], -l[1], -l[2], l[3] + 1},
               {-l[0], -l[1], l[2] + 1, -l[3]},
               {-l[0], l[1] + 1, -l[2], -l[3]},
               {l[0] + 1, -l[1], -l[2], -l[3]}}};
  }
  InvariantBasis basis;
  basis.coupling = c;
  for (const auto& a : alphas) {
    InvariantBlock b = make_block(a);
    basis.dim += static_cast<int>(b.elements.size());
    basis.blocks.push_back(std::move(b));
  }
  return basis;
}

CJet basis_jet(const BasisElement& f, cplx x, int order, const EllipticContext& ctx) {
  CJet acc = pow(wp_jet(x, order, ctx), f.n);
  const auto co = co_wp_jets(x, order, ctx);
  for (int i = 0; i < 3; ++i)
    if (f.beta[i] != 0) acc = acc * pow(co[i], f.beta[i]);
  return acc;
}

cplx basis_value(const BasisElement& f, cplx x, const EllipticContext& ctx) {
  cplx acc = std::pow(wp(x, ctx), f.n);
  for (int i = 0; i < 3; ++i)
    if (f.beta[i] != 0) acc *= std::pow(co_wp(i + 1, x, ctx), f.beta[i]);
  return acc;
}

HamiltonianAction hamiltonian_matrix(const InvariantBasis& basis, const EllipticContext& ctx) {
  const auto& l = basis.coupling;
  HamiltonianAction out;
  out.matrix = MatrixXc::Zero(basis.dim, basis.dim);
  int offset = 0;
  for (const auto& block : basis.blocks) {
    const int n = static_cast<int>(block.elements.size());
    if (n == 0) continue;
    auto sample = [&](int count, double shift, MatrixXc& f, MatrixXc& hf) {
      f.resize(count, n);
      hf.resize(count, n);
      for (int r = 0; r < count; ++r) {
        const cplx x = collocation_point((r + shift) / count, ctx);
        const CJet u = potential_jet(l, x, 0, ctx);
        for (int c = 0; c < n; ++c) {
          const CJet fj = basis_jet(block.elements[c], x, 2, ctx);
          f(r, c) = fj.value();
          hf(r, c) = -fj.deriv(2) + u.value() * fj.value();
        }
      }
    };
    MatrixXc f, hf;
    sample(4 * n, 0.5, f, hf);
    Eigen::VectorXd scale = f.colwise().norm().transpose();
    const MatrixXc fs = f * scale.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<MatrixXc> svd(fs, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cond = sv(0) / sv(sv.size() - 1);
    out.condition = std::max(out.condition, cond);
    if (!(cond < 1e12))
      throw NumericalError("hamiltonian_matrix: collocation condition number " + std::to_string(cond) +
                           " exceeds 1e12; choose different sample points");
    // fs * (D m) = hf with m = D^{-1} (fs^+ hf)
    const MatrixXc block_m = scale.cwiseInverse().asDiagonal() * svd.solve(hf);
    out.matrix.block(offset, offset, n, n) = block_m;

    MatrixXc ft, hft;
    sample(2 * n + 3, 0.23, ft, hft);
    const MatrixXc diff = hft - ft * block_m;
    for (int c = 0; c < n; ++c) {
      const double fnorm = ft.col(c).cwiseAbs().maxCoeff();
      out.residual = std::max(out.residual, diff.col(c).cwiseAbs().maxCoeff() / fnorm);
    }
    offset += n;
  }
  if (out.residual > 1e-8)
    throw NumericalError("hamiltonian_matrix: off-sample residual " + std::to_string(out.residual) +
                         " exceeds 1e-8");
  return out;
}

CPoly characteristic_polynomial(const MatrixXc& m) {
  if (m.rows() != m.cols()) throw DomainError("characteristic_polynomial: matrix must be square");
  if (m.rows() == 0) return CPoly::constant(1.0);
  Eigen::ComplexEigenSolver<MatrixXc> es(m, false);
  const VectorXc ev = es.eigenvalues();
  return CPoly::from_roots(std::vector<cplx>(ev.data(), ev.data() + ev.size()));
}

}  // namespace fingap
