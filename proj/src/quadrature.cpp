#include "fingap/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace fingap {

namespace {

GaussRule make_rule(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

template <typename F>
cplx apply_rule(const GaussRule& r, const F& f, double a, double b, double* mass = nullptr) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx acc = 0.0;
  double m = 0;
  for (size_t i = 0; i < r.nodes.size(); ++i) {
    const cplx v = f(c + h * r.nodes[i]);
    acc += r.weights[i] * v;
    m += r.weights[i] * std::abs(v);
  }
  if (mass) *mass = std::abs(h) * m;
  return h * acc;
}

template <typename F>
cplx adapt(const F& f, double a, double b, cplx coarse, double tol, int depth, int max_depth) {
  const double m = 0.5 * (a + b);
  double ml = 0, mr = 0;
  const cplx left = apply_rule(gauss_legendre(20), f, a, m, &ml);
  const cplx right = apply_rule(gauss_legendre(20), f, m, b, &mr);
  const cplx fine = left + right;
  // below this the difference is rounding noise
  const double floor = 1e-14 * (ml + mr);
  if (std::abs(fine - coarse) <= std::max(tol, floor)) return fine;
  if (depth >= max_depth) throw NumericalError("adaptive quadrature did not converge");
  return adapt(f, a, m, left, 0.5 * tol, depth + 1, max_depth) +
         adapt(f, m, b, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
  return it->second;
}

cplx integrate_unit(const std::function<cplx(double)>& f, double tol, int max_depth) {
  const cplx g20 = apply_rule(gauss_legendre(20), f, 0.0, 1.0);
  const cplx g10 = apply_rule(gauss_legendre(10), f, 0.0, 1.0);
  const double abs_tol = tol * std::max(1.0, std::abs(g20));
  if (std::abs(g20 - g10) <= abs_tol * 1e-2) return g20;
  return adapt(f, 0.0, 1.0, g20, abs_tol, 0, max_depth);
}

cplx integrate_segment(const PathIntegrand& f, cplx a, cplx b, double tol, int max_depth) {
  const cplx d = b - a;
  if (d == 0.0) return 0.0;
  return d * integrate_unit([&](double t) { return f(a + t * d); }, tol, max_depth);
}

}  // namespace fingap
