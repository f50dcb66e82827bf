#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace hcorbit {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

/// Raised when an input violates a documented precondition (unsupported
/// family, weight outside the holomorphic chamber, delta below b_lambda, ...).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical construction breaks down: degenerate forms,
/// missing z0, group elements drifting off K.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace tol {
// Algebraic identity residuals.
inline constexpr double kIdentity = 1e-10;
// Orthonormality of the B_theta basis.
inline constexpr double kOrthonormal = 1e-12;
// Relative singular value threshold for rank / kernel decisions.
inline constexpr double kRankRelative = 1e-9;
// Strict chamber membership.
inline constexpr double kChamberMargin = 1e-12;
} // namespace tol

} // namespace hcorbit
