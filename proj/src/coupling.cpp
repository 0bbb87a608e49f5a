#include "fingap/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace fingap {

int CouplingVector::weight() const {
  int w = 0;
  for (int v : l) w += v * (v + 1);
  return w;
}

std::array<int, 4> CouplingVector::sorted() const {
  std::array<int, 4> k = l;
  std::sort(k.begin(), k.end(), std::greater<>());
  return k;
}

std::string CouplingVector::str() const {
  return "(" + std::to_string(l[0]) + "," + std::to_string(l[1]) + "," + std::to_string(l[2]) + "," +
         std::to_string(l[3]) + ")";
}

CouplingVector normalize(std::array<int, 4> l) {
  for (int& v : l)
    if (v < 0) v = -v - 1;
  if (l[0] == 0 && l[1] == 0 && l[2] == 0 && l[3] == 0)
    throw DomainError("coupling vector is zero after normalization");
  return CouplingVector{l, true};
}

int genus_of(const CouplingVector& c) {
  const auto k = c.sorted();
  const int l = c.total();
  if (l % 2 == 0) return (2 * (k[0] + k[3]) >= l) ? k[0] : (l - 2 * k[3]) / 2;
  return (2 * k[0] >= l + 1) ? k[0] : (l + 1) / 2;
}

cplx potential(const CouplingVector& l, cplx x, const EllipticContext& ctx) {
  cplx u = 0.0;
  for (int i = 0; i < 4; ++i)
    if (l[i] != 0) u += double(l[i] * (l[i] + 1)) * wp(x + ctx.half_period(i), ctx);
  return u;
}

CJet potential_jet(const CouplingVector& l, cplx x, int order, const EllipticContext& ctx) {
  CJet u = CJet::zero(order);
  for (int i = 0; i < 4; ++i)
    if (l[i] != 0) u += double(l[i] * (l[i] + 1)) * wp_jet(x + ctx.half_period(i), order, ctx);
  return u;
}

double half_lattice_distance(cplx x, const EllipticContext& ctx) {
  double best = INFINITY;
  for (int i = 0; i < 4; ++i) best = std::min(best, lattice_distance(x + ctx.half_period(i), ctx));
  return best;
}

std::vector<cplx> regular_sample_points(int count, unsigned seed, const EllipticContext& ctx) {
  constexpr double a1 = 0.7548776662466927, a2 = 0.5698402909980532;
  const double h = std::min(0.45 * ctx.tau().imag(), 0.6);
  const double clearance = 0.07 * std::min(1.0, std::abs(ctx.tau()));
  std::vector<cplx> pts;
  for (unsigned k = seed * 7919u + 1u; static_cast<int>(pts.size()) < count; ++k) {
    const double u = std::fmod(0.5 + a1 * k, 1.0);
    const double v = std::fmod(0.5 + a2 * k, 1.0);
    const cplx x(u, (2.0 * v - 1.0) * h);
    if (half_lattice_distance(x, ctx) >= clearance) pts.push_back(x);
  }
  return pts;
}

std::vector<cplx> quiet_sample_points(const CouplingVector& l, int count, const EllipticContext& ctx) {
  const auto pool = regular_sample_points(24 * count, 101, ctx);
  const double s = ctx.energy_scale();
  std::vector<std::pair<double, cplx>> scored;
  for (cplx x : pool) {
    double score = 0;
    for (int i = 0; i < 4; ++i)
      if (l[i] > 0) score += l[i] * std::log(std::max(std::abs(wp(x + ctx.half_period(i), ctx)), s));
    scored.push_back({score, x});
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  const double sep = 0.05 * std::min(1.0, std::abs(ctx.tau()));
  std::vector<cplx> pts;
  for (const auto& [score, x] : scored) {
    bool apart = true;
    for (cplx y : pts) apart = apart && std::abs(x - y) >= sep && std::abs(x + y - std::round((x + y).real())) >= sep;
    if (apart) pts.push_back(x);
    if (static_cast<int>(pts.size()) == count) break;
  }
  return pts;
}

}  // namespace fingap
