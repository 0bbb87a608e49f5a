#include "fingap/xi_solver.hpp"

#include <algorithm>

#include <Eigen/SVD>

namespace fingap {

namespace {

std::vector<XiExpansion::Term> ansatz_terms(const CouplingVector& l) {
  std::vector<XiExpansion::Term> t{{0, 0}};
  for (int i = 0; i < 4; ++i)
    for (int k = 1; k <= l[i]; ++k) t.push_back({i, k});
  return t;
}

// Jets of every ansatz function at x.
std::vector<CJet> term_jets(const std::vector<XiExpansion::Term>& terms, cplx x, int order,
                            const EllipticContext& ctx) {
  std::array<CJet, 4> base;
  std::array<bool, 4> have{};
  std::vector<CJet> out;
  out.reserve(terms.size());
  for (const auto& t : terms) {
    if (t.power == 0) {
      out.push_back(CJet::constant(1.0, order));
      continue;
    }
    if (!have[t.half_period]) {
      base[t.half_period] = wp_jet(x + ctx.half_period(t.half_period), order, ctx);
      have[t.half_period] = true;
    }
    out.push_back(pow(base[t.half_period], t.power));
  }
  return out;
}

struct KernelResult {
  int dim = 0;
  double gap = 0;
  VectorXc vec;
};

// Truncated Laurent series sum_k c_k y^(low + k).
struct Laurent {
  int low = 0;
  CJet c;

  Laurent derivative() const {
    CJet::Coeffs d(c.order() + 1);
    for (int k = 0; k <= c.order(); ++k) d(k) = double(low + k) * c[k];
    return {low - 1, CJet(d)};
  }
  Laurent magnitude() const { return {low, CJet(CJet::Coeffs(c.coeffs().cwiseAbs().cast<cplx>()))}; }
  cplx coeff(int power) const {
    const int k = power - low;
    return (k >= 0 && k <= c.order()) ? c[k] : cplx(0.0);
  }
};

Laurent operator*(const Laurent& a, const Laurent& b) { return {a.low + b.low, a.c * b.c}; }
Laurent operator*(cplx s, const Laurent& a) { return {a.low, s * a.c}; }
Laurent operator+(const Laurent& a, const Laurent& b) {
  const int low = std::min(a.low, b.low);
  const int top = std::min(a.low + a.c.order(), b.low + b.c.order());
  CJet::Coeffs c(top - low + 1);
  for (int p = low; p <= top; ++p) c(p - low) = a.coeff(p) + b.coeff(p);
  return {low, CJet(c)};
}

// Expansions of wp(x + w_b)^k at every half period w_a carrying a pole of
// the potential, in y = x - w_a, truncated above y^top.
struct PoleExpansions {
  std::vector<int> poles;
  int kmax = 0;
  int top = 0;
  std::vector<std::vector<std::vector<Laurent>>> w;  // w[a][b][k]
  std::vector<Laurent> u, du;

  PoleExpansions(const CouplingVector& l, int kmax_, const EllipticContext& ctx) : kmax(kmax_), top(2 * kmax_ + 4) {
    for (int i = 0; i < 4; ++i)
      if (l[i] > 0) poles.push_back(i);
    const int np = static_cast<int>(poles.size());
    const CJet jw = wp_square_jet(top + 2 * kmax + 2, ctx);
    w.assign(np, std::vector<std::vector<Laurent>>(np));
    for (int a = 0; a < np; ++a) {
      Laurent uu{0, CJet::zero(top)};
      for (int b = 0; b < np; ++b) {
        Laurent base;
        if (a == b)
          base = {-2, jw};
        else
          base = {0, wp_jet(ctx.half_period(poles[a]) + ctx.half_period(poles[b]), top, ctx)};
        // every expansion here is even in y; drop round-off in the odd slots
        for (int k = 1; k <= base.c.order(); k += 2) base.c.coeffs()(k) = 0.0;
        auto& row = w[a][b];
        row.push_back({0, CJet::constant(1.0, top)});
        for (int k = 1; k <= kmax; ++k) {
          Laurent p{base.low * k, pow(base.c, k)};
          p.c = CJet(CJet::Coeffs(p.c.coeffs().head(top - p.low + 1)));
          row.push_back(p);
        }
        const int lb = l[poles[b]];
        uu = uu + double(lb * (lb + 1)) * row[1];
      }
      u.push_back(uu);
      du.push_back(uu.derivative());
    }
  }

  // r(0, 0) + sum_b sum_k r(b, k) wp(x + w_b)^k expanded at pole a
  Laurent expand(const MatrixXc& r, int a) const {
    Laurent f = r(0, 0) * w[a][0][0];
    for (size_t b = 0; b < poles.size(); ++b)
      for (int k = 1; k <= kmax; ++k)
        if (r(b, k) != 0.0) f = f + r(b, k) * w[a][b][k];
    return f;
  }

  Laurent expand_bound(const Eigen::MatrixXd& r, int a) const {
    Laurent f = cplx(r(0, 0)) * w[a][0][0];
    for (size_t b = 0; b < poles.size(); ++b)
      for (int k = 1; k <= kmax; ++k)
        if (r(b, k) != 0.0) f = f + cplx(r(b, k)) * w[a][b][k].magnitude();
    return f;
  }
};

struct RecursionTerms {
  std::vector<MatrixXc> value;
  // entrywise bounds on the sums that produced each coefficient
  std::vector<Eigen::MatrixXd> bound;
};

// R_0 = 1 and 4 R_(m+1)' = -(R_m''' - 4 u R_m' - 2 u' R_m) with zero constant
// terms. Row b of R_m holds the coefficients of wp(x + w_b)^k at column k;
// entry (0, 0) is the constant term.
RecursionTerms recursion_terms(const PoleExpansions& pe, int count) {
  const int np = static_cast<int>(pe.poles.size());
  RecursionTerms out;
  MatrixXc r = MatrixXc::Zero(np, pe.kmax + 1);
  r(0, 0) = 1.0;
  out.value.push_back(r);
  out.bound.push_back(r.cwiseAbs());
  for (int m = 1; m < count; ++m) {
    MatrixXc next = MatrixXc::Zero(np, pe.kmax + 1);
    Eigen::MatrixXd next_bound = Eigen::MatrixXd::Zero(np, pe.kmax + 1);
    for (int a = 0; a < np; ++a) {
      const Laurent f = pe.expand(out.value.back(), a);
      const Laurent f1 = f.derivative();
      const Laurent f3 = f1.derivative().derivative();
      const Laurent rhs = cplx(-0.25) * (f3 + cplx(-4.0) * (pe.u[a] * f1) + cplx(-2.0) * (pe.du[a] * f));
      const Laurent g = pe.expand_bound(out.bound.back(), a);
      const Laurent g1 = g.derivative().magnitude();
      const Laurent g3 = g1.derivative().derivative().magnitude();
      const Laurent rhs_bound =
          cplx(0.25) * (g3 + cplx(4.0) * (pe.u[a].magnitude() * g1) + cplx(2.0) * (pe.du[a].magnitude() * g));
      // principal part of the antiderivative, peeled into powers of wp(x + w_a)
      std::vector<cplx> pp(pe.kmax + 1, 0.0);
      std::vector<double> pb(pe.kmax + 1, 0.0);
      for (int k = 1; k <= pe.kmax; ++k) {
        pp[k] = rhs.coeff(-2 * k - 1) / double(-2 * k);
        pb[k] = std::abs(rhs_bound.coeff(-2 * k - 1)) / double(2 * k);
      }
      for (int k = pe.kmax; k >= 1; --k) {
        next(a, k) = pp[k];
        next_bound(a, k) = pb[k];
        const CJet& wk = pe.w[a][a][k].c;
        for (int q = 1; q < k; ++q) {
          pp[q] -= pp[k] * wk[2 * (k - q)];
          pb[q] += pb[k] * std::abs(wk[2 * (k - q)]);
        }
      }
    }
    out.value.push_back(next);
    out.bound.push_back(next_bound);
  }
  return out;
}

struct LinearSystem {
  MatrixXc a;
  Eigen::MatrixXd mag;
};

LinearSystem collocation_system(const CouplingVector& l, const std::vector<XiExpansion::Term>& terms, int g,
                            const EllipticContext& ctx, unsigned seed) {
  const int nt = static_cast<int>(terms.size());
  const int unknowns = (g + 1) * nt;
  const int npts = std::max(3 * nt, (2 * unknowns) / (g + 2) + 2);
  const auto pts = regular_sample_points(npts, seed, ctx);

  MatrixXc a = MatrixXc::Zero(npts * (g + 2), unknowns);
  for (int r = 0; r < npts; ++r) {
    const cplx x = pts[r];
    const auto tj = term_jets(terms, x, 3, ctx);
    const CJet u = potential_jet(l, x, 1, ctx);
    for (int t = 0; t < nt; ++t) {
      const cplx d1 = tj[t].deriv(1);
      const cplx l0 = tj[t].deriv(3) - 4.0 * u.value() * d1 - 2.0 * u.deriv(1) * tj[t].value();
      // E^(g+1): 4 a_0'
      a(r * (g + 2), t) = 4.0 * d1;
      for (int j = 0; j <= g; ++j) {
        // E^(g-j): L0 a_j + 4 a_(j+1)'
        const int row = r * (g + 2) + j + 1;
        a(row, j * nt + t) += l0;
        if (j + 1 <= g) a(row, (j + 1) * nt + t) += 4.0 * d1;
      }
    }
  }
  return {a, a.cwiseAbs()};
}

// Scales rows and columns of a so that the bounds in mag approach unit
// maximum; returns the column factors, so the kernel of the original matrix
// is diag(cs) times the kernel of the scaled one. Entries that cancelled to
// round-off stay small.
Eigen::VectorXd equilibrate(MatrixXc& a, Eigen::MatrixXd mag) {
  Eigen::VectorXd cs = Eigen::VectorXd::Ones(a.cols());
  for (int sweep = 0; sweep < 8; ++sweep) {
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      const double m = mag.row(r).maxCoeff();
      if (m > 0) {
        a.row(r) /= m;
        mag.row(r) /= m;
      }
    }
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      const double m = mag.col(c).maxCoeff();
      if (m > 0) {
        a.col(c) /= m;
        mag.col(c) /= m;
        cs(c) /= m;
      }
    }
  }
  return cs;
}

// Kernel of a scaled system: the trailing run of singular values below the
// largest ratio exceeding 1e6.
KernelResult kernel_of(const MatrixXc& a) {
  const Eigen::Index cols = a.cols();
  MatrixXc as = MatrixXc::Zero(std::max(a.rows(), cols), cols);
  as.topRows(a.rows()) = a;
  Eigen::JacobiSVD<MatrixXc> svd(as, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const int n = static_cast<int>(sv.size());
  KernelResult res;
  double best = 0;
  int cut = n;
  for (int k = 1; k < n; ++k) {
    const double ratio = sv(k) > 0 ? sv(k - 1) / sv(k) : INFINITY;
    if (ratio > 1e6 && ratio > best) {
      best = ratio;
      cut = k;
    }
  }
  res.dim = (best > 0) ? n - cut : 0;
  res.gap = best;
  if (res.dim == 1) res.vec = svd.matrixV().col(cols - 1);
  return res;
}

KernelResult collocation_kernel(const CouplingVector& l, const std::vector<XiExpansion::Term>& terms, int g,
                                const EllipticContext& ctx, unsigned seed) {
  const LinearSystem sys = collocation_system(l, terms, g, ctx, seed);
  Eigen::VectorXd cscale = sys.mag.colwise().norm().transpose();
  for (Eigen::Index c = 0; c < cscale.size(); ++c)
    if (cscale(c) == 0.0) cscale(c) = 1.0;
  MatrixXc as = sys.a * cscale.cwiseInverse().asDiagonal();
  for (Eigen::Index r = 0; r < as.rows(); ++r) {
    const double n = as.row(r).norm();
    if (n > 0) as.row(r) /= n;
  }
  KernelResult k = kernel_of(as);
  if (k.dim == 1) k.vec = cscale.cwiseInverse().asDiagonal() * k.vec;
  return k;
}

XiExpansion make_expansion(const CouplingVector& l, int g, const std::vector<XiExpansion::Term>& terms, double gap) {
  XiExpansion xi;
  xi.coupling = l;
  xi.g = g;
  xi.terms = terms;
  xi.kernel_gap = gap;
  xi.coeffs = MatrixXc::Zero(static_cast<Eigen::Index>(terms.size()), g + 1);
  return xi;
}

XiExpansion xi_by_collocation(const CouplingVector& l, const EllipticContext& ctx, const XiOptions& opt) {
  const auto terms = ansatz_terms(l);
  const int nt = static_cast<int>(terms.size());
  int g = genus_of(l);
  std::string trail;
  for (int attempt = 0; attempt <= opt.max_retries && g >= 0; ++attempt) {
    const KernelResult k = collocation_kernel(l, terms, g, ctx, opt.seed);
    trail += " g=" + std::to_string(g) + ":dim=" + std::to_string(k.dim);
    if (k.dim == 1) {
      // normalize: the constant term of a_0 is 1
      const cplx lead = k.vec(0);
      if (std::abs(lead) < 1e-12 * k.vec.cwiseAbs().maxCoeff()) break;
      XiExpansion xi = make_expansion(l, g, terms, k.gap);
      for (int j = 0; j <= g; ++j)
        for (int t = 0; t < nt; ++t) xi.coeffs(t, g - j) = k.vec(j * nt + t) / lead;
      return xi;
    }
    g = k.dim == 0 ? g + 1 : g - (k.dim - 1);
  }
  throw NumericalError("compute_xi: no one-dimensional kernel for l=" + l.str() + "; attempts" + trail);
}

XiExpansion xi_by_recursion(const CouplingVector& l, const EllipticContext& ctx, const XiOptions& opt) {
  const auto terms = ansatz_terms(l);
  const int count = genus_of(l) + opt.max_retries + 2;
  const PoleExpansions pe(l, count - 1, ctx);
  const auto rt = recursion_terms(pe, count);
  const auto& r = rt.value;
  const int np = static_cast<int>(pe.poles.size());
  int g = genus_of(l);
  std::string trail;
  for (int attempt = 0; attempt <= opt.max_retries && g >= 0 && g + 1 < count; ++attempt) {
    // sum_m c_(g-m) R_(m+1) must reduce to a constant, with c_0 = 1
    MatrixXc a(np * pe.kmax, g + 1);
    Eigen::MatrixXd mag(np * pe.kmax, g + 1);
    for (int m = 0; m <= g; ++m)
      for (int b = 0; b < np; ++b)
        for (int k = 1; k <= pe.kmax; ++k) {
          a(b * pe.kmax + k - 1, m) = r[m + 1](b, k);
          mag(b * pe.kmax + k - 1, m) = rt.bound[m + 1](b, k);
        }
    const Eigen::VectorXd cs = equilibrate(a, mag);
    KernelResult ker = kernel_of(a);
    // c_0 = 1 needs a nonzero weight on R_(g+1)
    if (ker.dim == 1 && std::abs(ker.vec(g)) < 1e-12 * ker.vec.cwiseAbs().maxCoeff()) break;
    if (ker.dim == 1) ker.vec = cs.asDiagonal() * ker.vec;
    trail += " g=" + std::to_string(g) + ":dim=" + std::to_string(ker.dim);
    if (ker.dim == 1) {
      const cplx lead = ker.vec(g);
      std::vector<cplx> c(g + 1);
      for (int m = 0; m <= g; ++m) c[g - m] = ker.vec(m) / lead;
      XiExpansion xi = make_expansion(l, g, terms, ker.gap);
      xi.tau = ctx.tau();
      double leak = 0;
      for (int j = 0; j <= g; ++j) {
        MatrixXc aj = MatrixXc::Zero(np, pe.kmax + 1);
        for (int m = 0; m <= j; ++m) aj += c[j - m] * r[m];
        aj(0, 0) = c[j];
        // a_j cannot have poles beyond the ansatz; compare against the
        // terms of the recursion that had to cancel
        for (int b = 0; b < np; ++b)
          for (int k = l[pe.poles[b]] + 1; k <= pe.kmax; ++k) {
            double size = 0;
            for (int m = 0; m <= j; ++m) size = std::max(size, std::abs(c[j - m]) * rt.bound[m](b, k));
            if (size > 0) leak = std::max(leak, std::abs(aj(b, k)) / size);
          }
        for (size_t t = 0; t < terms.size(); ++t) {
          const auto& term = terms[t];
          if (term.power == 0) {
            xi.coeffs(static_cast<Eigen::Index>(t), g - j) = c[j];
            continue;
          }
          const int b = static_cast<int>(std::find(pe.poles.begin(), pe.poles.end(), term.half_period) - pe.poles.begin());
          xi.coeffs(static_cast<Eigen::Index>(t), g - j) = aj(b, term.power);
        }
      }
      if (leak > 1e-6)
        throw NumericalError("compute_xi: solution for l=" + l.str() + " leaves the ansatz (relative " +
                             std::to_string(leak) + ")");
      return xi;
    }
    g = ker.dim == 0 ? g + 1 : g - (ker.dim - 1);
  }
  throw NumericalError("compute_xi: no one-dimensional kernel for l=" + l.str() + "; attempts" + trail);
}

}  // namespace

CPoly XiExpansion::c0() const { return CPoly(VectorXc(coeffs.row(0).transpose())); }

CPoly XiExpansion::b(int i, int j) const {
  const int k = coupling[i] - j;
  for (size_t t = 0; t < terms.size(); ++t)
    if (terms[t].half_period == i && terms[t].power == k && k > 0)
      return CPoly(VectorXc(coeffs.row(static_cast<Eigen::Index>(t)).transpose()));
  throw DomainError("XiExpansion::b: index out of range");
}

VectorXc XiExpansion::slice_coeffs(int j) const { return coeffs.col(g - j); }

XiExpansion compute_xi(const CouplingVector& l, const EllipticContext& ctx, const XiOptions& opt) {
  if (!l.normalized) throw DomainError("compute_xi: coupling vector must be normalized");
  XiExpansion xi = opt.method == XiMethod::recursion ? xi_by_recursion(l, ctx, opt) : xi_by_collocation(l, ctx, opt);
  xi.tau = ctx.tau();
  return xi;
}

CPoly curve_polynomial_at_pole(const XiExpansion& xi, int half_period, const EllipticContext& ctx) {
  const auto& l = xi.coupling;
  if (half_period < 0 || half_period > 3 || l[half_period] == 0)
    throw DomainError("curve_polynomial_at_pole: w_" + std::to_string(half_period) + " is not a pole of the potential");
  int lmax = 0;
  for (int v : l.l) lmax = std::max(lmax, v);
  // the triple product Xi Xi u needs every expansion through y^(4 lmax + 2)
  const PoleExpansions pe(l, 2 * lmax + 1, ctx);
  const int a = static_cast<int>(std::find(pe.poles.begin(), pe.poles.end(), half_period) - pe.poles.begin());
  const int np = static_cast<int>(pe.poles.size());
  std::vector<Laurent> x0, x1, x2;
  for (int e = 0; e <= xi.g; ++e) {
    MatrixXc r = MatrixXc::Zero(np, pe.kmax + 1);
    for (size_t t = 0; t < xi.terms.size(); ++t) {
      const auto& term = xi.terms[t];
      const cplx c = xi.coeffs(static_cast<Eigen::Index>(t), e);
      if (term.power == 0) {
        r(0, 0) += c;
        continue;
      }
      const int b = static_cast<int>(std::find(pe.poles.begin(), pe.poles.end(), term.half_period) - pe.poles.begin());
      r(b, term.power) += c;
    }
    x0.push_back(pe.expand(r, a));
    x1.push_back(x0.back().derivative());
    x2.push_back(x1.back().derivative());
  }
  VectorXc q = VectorXc::Zero(2 * xi.g + 2);
  for (int e1 = 0; e1 <= xi.g; ++e1)
    for (int e2 = 0; e2 <= xi.g; ++e2) {
      q(e1 + e2 + 1) += (x0[e1] * x0[e2]).coeff(0);
      q(e1 + e2) += (cplx(-1.0) * (x0[e1] * x0[e2] * pe.u[a]) + cplx(0.5) * (x0[e1] * x2[e2]) +
                     cplx(-0.25) * (x1[e1] * x1[e2]))
                        .coeff(0);
    }
  return CPoly(q);
}

CJet ansatz_jet(const XiExpansion& xi, const VectorXc& c, cplx x, int order, const EllipticContext& ctx) {
  const auto tj = term_jets(xi.terms, x, order, ctx);
  CJet acc = CJet::zero(order);
  for (size_t t = 0; t < tj.size(); ++t)
    if (c(static_cast<Eigen::Index>(t)) != 0.0) acc += c(static_cast<Eigen::Index>(t)) * tj[t];
  return acc;
}

std::vector<SliceFn> xi_slices(const XiExpansion& xi, const EllipticContext& ctx) {
  std::vector<SliceFn> out;
  for (int j = 0; j <= xi.g; ++j) {
    VectorXc c = xi.slice_coeffs(j);
    out.push_back([xi, ctx, c](cplx x, int order) { return ansatz_jet(xi, c, x, order, ctx); });
  }
  return out;
}

CJet xi_jet(const XiExpansion& xi, cplx x, cplx E, int order, const EllipticContext& ctx) {
  VectorXc c = VectorXc::Zero(xi.coeffs.rows());
  cplx ep = 1.0;
  for (int e = 0; e <= xi.g; ++e, ep *= E) c += ep * xi.coeffs.col(e);
  return ansatz_jet(xi, c, x, order, ctx);
}

cplx xi_value(const XiExpansion& xi, cplx x, cplx E, const EllipticContext& ctx) {
  return xi_jet(xi, x, E, 0, ctx).value();
}

std::array<CPoly, 3> xi_polynomials_at(const XiExpansion& xi, cplx x, const EllipticContext& ctx) {
  const auto tj = term_jets(xi.terms, x, 2, ctx);
  std::array<CPoly, 3> out;
  for (int d = 0; d <= 2; ++d) {
    VectorXc c = VectorXc::Zero(xi.g + 1);
    for (size_t t = 0; t < tj.size(); ++t) c += tj[t].deriv(d) * xi.coeffs.row(static_cast<Eigen::Index>(t)).transpose();
    out[d] = CPoly(c);
  }
  return out;
}

CPoly xi_polynomial_at(const XiExpansion& xi, cplx x, const EllipticContext& ctx) {
  const auto tj = term_jets(xi.terms, x, 0, ctx);
  VectorXc c = VectorXc::Zero(xi.g + 1);
  for (size_t t = 0; t < tj.size(); ++t) c += tj[t].value() * xi.coeffs.row(static_cast<Eigen::Index>(t)).transpose();
  return CPoly(c);
}

cplx product_ode_residual(const std::function<CJet(cplx x, int order)>& h, cplx x, cplx E,
                          const CouplingVector& l, const EllipticContext& ctx) {
  const CJet hj = h(x, 3);
  if (hj.order() < 3) throw DomainError("product_ode_residual: jet of order >= 3 required");
  const CJet u = potential_jet(l, x, 1, ctx);
  return hj.deriv(3) - 4.0 * (u.value() - E) * hj.deriv(1) - 2.0 * u.deriv(1) * hj.value();
}

}  // namespace fingap
