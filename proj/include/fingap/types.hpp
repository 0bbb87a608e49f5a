#ifndef FINGAP_TYPES_HPP
#define FINGAP_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fingap {

using cplx = std::complex<double>;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline const cplx I{0.0, 1.0};

// Raised for inputs outside the mathematical domain of an operation
// (pole proximity, Q(E) = 0 where a regular point is required, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when a numerical procedure cannot reach its tolerance
// (rank gaps, ill-conditioned collocation, Newton failure, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fingap

#endif  // FINGAP_TYPES_HPP
