#ifndef FINGAP_SPECTRAL_PROBLEM_HPP
#define FINGAP_SPECTRAL_PROBLEM_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fingap/monodromy.hpp"

namespace fingap {

/// Boundary-condition class on the real period. D: l0, l1 >= 1; Dstar:
/// exactly one of l0, l1 is zero; DstarStar: l0 = l1 = 0.
enum class BoundaryTag { D, Dstar, DstarStar };

struct BoundaryClass {
  BoundaryTag tag = BoundaryTag::D;
  /// Admissible multipliers B(E) over the real period.
  std::vector<int> target_multipliers;
  /// Exponents (a, b) of the ground-state factor sin(pi x)^a cos(pi x)^b.
  int ground_sin = 0;
  int ground_cos = 0;
};

BoundaryClass boundary_class(const CouplingVector& l);
std::string tag_name(BoundaryTag t);

/// p -> 0 eigenvalue of the m-th state of the class.
double trig_eigenvalue(int m, const CouplingVector& l);

/// tau = log(p) / (pi i) on the principal branch (p = exp(pi i tau)).
cplx tau_from_nome(cplx p);

/// Everything the eigenvalue condition needs at one lattice: the curve, the
/// base root (the one farthest from the others) and its sign.
struct SpectralSetup {
  CouplingVector l;
  EllipticContext ctx;
  XiExpansion xi;
  SpectralCurve curve;
  BoundaryClass cls;
  cplx E0;
  int sign0 = 1;
};
SpectralSetup make_spectral_setup(const CouplingVector& l, const EllipticContext& ctx);

struct EigenconditionValue {
  /// J(E) = int_{E0}^{E} Q1 / sqrt(-Q) dE.
  cplx integral;
  cplx lattice_point;
  /// integral - lattice_point.
  cplx residual;
  /// dJ/dE = Q1(E) / sqrt(-Q(E)) on the continued branch.
  cplx derivative;
};

/// Distance of J(E) to the admissible lattice: 2 pi i (l0 + l1) + 4 pi i Z for
/// class D with a periodic base root (2 pi i (l0 + l1 + 1) + 4 pi i Z for an
/// antiperiodic one), 2 pi i Z otherwise. `lattice_point` pins the target;
/// the nearest point is used when it is absent. Throws DomainError at a root
/// of Q.
EigenconditionValue eigencondition(cplx E, const SpectralSetup& s, std::optional<cplx> lattice_point = std::nullopt);

struct NewtonOutcome {
  cplx E;
  cplx lattice_point;
  double residual = 0;
  int iterations = 0;
  bool converged = false;
};

/// Damped Newton on the eigencondition, derivative from the integrand.
NewtonOutcome solve_eigencondition(cplx guess, const SpectralSetup& s, std::optional<cplx> lattice_point = std::nullopt,
                                   double tol = 1e-11, int max_iter = 40);

struct EigenSample {
  cplx p;
  cplx E;
  double residual = 0;
  bool near_Q_root = false;
  bool near_Q1_root = false;
};

struct EigenTrajectory {
  int m = 0;
  CouplingVector l;
  BoundaryClass cls;
  std::vector<EigenSample> samples;
  bool truncated = false;
  std::string diagnostic;
};

/// Follows the m-th eigenvalue along p_path, starting from the trigonometric
/// value at p_path[0] (|p| <= 0.05 required). A failed step is retried on
/// halved sub-steps down to 1/256 of the original; past that the trajectory
/// is cut with a diagnostic. Samples with |Q(E)| or |Q1(E)| below 1e-4 of
/// their scale are flagged.
EigenTrajectory continue_eigenvalue(int m, const CouplingVector& l, const std::vector<cplx>& p_path);

/// n + 1 nomes from a to b.
std::vector<cplx> nome_path(cplx a, cplx b, int steps);

struct BandStructure {
  /// Sorted roots of Q, the band edges.
  std::vector<double> edges;
  /// (-inf, e0), (e1, e2), ...
  std::vector<std::pair<double, double>> gaps;
  /// |B| = 1 at band midpoints and |B| != 1 at gap midpoints.
  bool multiplier_check = false;
  double worst_band_deviation = 0;
  double smallest_gap_deviation = 0;
};

/// Gaps of the real spectrum for l0 = l1 = 0 on a rectangular lattice
/// (tau in Z + i R+). Throws DomainError outside that case and
/// NumericalError if Q has non-real roots.
BandStructure band_structure(const CouplingVector& l, const EllipticContext& ctx);

/// Eigenvalues of H on the invariant space, sorted by real part.
std::vector<cplx> nonrepeated_eigenvalues(const CouplingVector& l, const EllipticContext& ctx);

/// Shooting test for the real-period problem: the solution regular at x = 0
/// (Frobenius exponent l0 + 1) is carried to x = 1/2 and compared with the
/// solution regular there. Returns their normalized Wronskian, which
/// vanishes exactly when E is an eigenvalue with both ends regular.
cplx regularity_mismatch(cplx E, const CouplingVector& l, const EllipticContext& ctx);

}  // namespace fingap

#endif  // FINGAP_SPECTRAL_PROBLEM_HPP
