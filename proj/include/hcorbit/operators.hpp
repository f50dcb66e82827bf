#pragma once

#include "hcorbit/lie_algebra.hpp"

namespace hcorbit {

/// Scalar functions applied to the spectrum of ad(Z).
namespace spectral {
double psi(double x);             // (1 - e^{-x}) / x
double psi_plus(double x);        // sinh(x) / x
double psi_minus(double x);       // -(cosh(x) - 1) / x
double psi_plus_slope(double x);  // d/dx sinh(x)/x
double chi(double x);             // psi_minus / psi_plus = -tanh(x/2)
double cosh_gap(double x, double t); // (cosh(t x) - 1) / t^2, equal to x^2/2 at t = 0
} // namespace spectral

/// Eigendecomposition ad(Z) = V diag(nu) V^T of a p-element. ad(Z) is
/// symmetric in the orthonormal basis, so V is orthogonal.
class AdSpectrum {
public:
  AdSpectrum() = default;
  AdSpectrum(const MatrixLieAlgebra& g, const Vec& z);

  const Mat& vectors() const { return vectors_; }
  const Vec& values() const { return values_; }

  /// f(scale * ad(Z)).
  template <class F>
  Mat apply(F f, double scale = 1.0) const {
    Vec d(values_.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = f(scale * values_(i));
    return vectors_ * d.asDiagonal() * vectors_.transpose();
  }

private:
  Mat vectors_;
  Vec values_;
};

/// Psi_Z and its even/odd parts, chi_Z, as matrices in the orthonormal basis.
struct OperatorAtZ {
  Vec z;
  Mat psi;
  Mat psi_plus;
  Mat psi_minus;
  Mat chi;
  Vec ad_eigenvalues;
};

/// Spectral evaluation. `z` in g-coordinates; throws DomainError if z is not in p.
OperatorAtZ psi_operators(const MatrixLieAlgebra& g, const Vec& z);
/// Truncated power series, for cross-checking at small |Z|.
OperatorAtZ psi_operators_series(const MatrixLieAlgebra& g, const Vec& z, int terms = 30);

struct ChiSpectrumCheck {
  bool pass = false;
  double multiset_error = 0.0;     // sorted eigenvalues vs sorted tanh(nu/2)
  double max_abs_eigenvalue = 0.0;
};

ChiSpectrumCheck chi_spectrum_check(const MatrixLieAlgebra& g, const Vec& z, double tol = 1e-8);

// Group-level helpers in the ambient matrix model.

/// exp of a k-element (anti-Hermitian matrix); unitary to rounding.
CMat exp_k(const MatrixLieAlgebra& g, const Vec& x);
/// exp of a p-element (Hermitian matrix); positive definite.
CMat exp_p(const MatrixLieAlgebra& g, const Vec& z);
/// General matrix exponential of a g-element.
CMat exp_element(const MatrixLieAlgebra& g, const Vec& x);
/// Principal logarithm, for group elements close to the identity.
CMat log_near_identity(const CMat& u);

double unitarity_residual(const CMat& k);
/// Unitary polar factor U V^dagger of k = U S V^dagger.
CMat polar_project(const CMat& k);

/// Coefficients of g . xi, i.e. Ad(g^{-1})^T xi.
Vec coadjoint_action(const MatrixLieAlgebra& g, const CMat& grp, const Vec& xi);

/// Gamma(k lambda, Z) = e^Z k . lambda. Throws NumericalError if k is off K.
Vec gamma_map(const MatrixLieAlgebra& g, const CMat& k, const Vec& lambda, const Vec& z);

/// Tangent vector at Gamma(k lambda, Z) in the form [base, direction].
struct GammaTangent {
  CMat base;      // e^Z k
  Vec direction;  // X + Ad(k^{-1}) Psi_Z(A)
};

/// x: k-element, a: p-element (both g-coordinates).
GammaTangent d_gamma(const MatrixLieAlgebra& g, const CMat& k, const Vec& z, const Vec& x,
                     const Vec& a);

/// Coefficients of d/dt base e^{tW} . lambda at t = 0.
Vec tangent_to_coadjoint(const MatrixLieAlgebra& g, const CMat& base, const Vec& direction,
                         const Vec& lambda);

} // namespace hcorbit
