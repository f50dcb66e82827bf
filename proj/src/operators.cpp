#include "hcorbit/operators.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hcorbit {

namespace spectral {

double psi(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - 0.5 * x;
  return -std::expm1(-x) / x;
}

double psi_plus(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sinh(x) / x;
}

double psi_minus(double x) {
  if (std::abs(x) < 1e-4) return -(0.5 * x + x * x * x / 24.0);
  const double s = std::sinh(0.5 * x);
  return -2.0 * s * s / x;
}

double psi_plus_slope(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return x * (1.0 / 3.0 + x2 * (1.0 / 30.0 + x2 * (1.0 / 840.0 + x2 / 45360.0)));
  }
  return (x * std::cosh(x) - std::sinh(x)) / (x * x);
}

double chi(double x) { return -std::tanh(0.5 * x); }

double cosh_gap(double x, double t) {
  if (t == 0.0) return 0.5 * x * x;
  const double s = std::sinh(0.5 * t * x);
  return 2.0 * s * s / (t * t);
}

} // namespace spectral

namespace {

void require_p(const MatrixLieAlgebra& g, const Vec& z) {
  if (z.size() != g.dim()) throw DomainError("element has the wrong dimension");
  const double kn = z.head(g.dim_k()).norm();
  if (kn > 1e-10 * std::max(1.0, z.norm())) {
    std::ostringstream os;
    os << "element is not in p (k-component norm " << kn << ")";
    throw DomainError(os.str());
  }
}

} // namespace

AdSpectrum::AdSpectrum(const MatrixLieAlgebra& g, const Vec& z) {
  Mat ad = g.adjoint_matrix(z);
  ad = 0.5 * (ad + ad.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(ad);
  vectors_ = es.eigenvectors();
  values_ = es.eigenvalues();
}

OperatorAtZ psi_operators(const MatrixLieAlgebra& g, const Vec& z) {
  require_p(g, z);
  const AdSpectrum sp(g, z);
  OperatorAtZ op;
  op.z = z;
  op.ad_eigenvalues = sp.values();
  op.psi = sp.apply(spectral::psi);
  op.psi_plus = sp.apply(spectral::psi_plus);
  op.psi_minus = sp.apply(spectral::psi_minus);
  op.chi = sp.apply(spectral::chi);
  return op;
}

OperatorAtZ psi_operators_series(const MatrixLieAlgebra& g, const Vec& z, int terms) {
  require_p(g, z);
  const int N = g.dim();
  const Mat ad = g.adjoint_matrix(z);
  OperatorAtZ op;
  op.z = z;
  op.psi = Mat::Zero(N, N);
  op.psi_plus = Mat::Zero(N, N);
  op.psi_minus = Mat::Zero(N, N);
  Mat power = Mat::Identity(N, N);  // ad^n
  double fact = 1.0;                // (n+1)!
  for (int n = 0; n < terms; ++n) {
    fact *= (n + 1);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    op.psi += (sign / fact) * power;
    if (n % 2 == 0)
      op.psi_plus += power / fact;
    else
      op.psi_minus -= power / fact;
    power = (power * ad).eval();
  }
  op.chi = op.psi_minus * op.psi_plus.inverse();
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (ad + ad.transpose()));
  op.ad_eigenvalues = es.eigenvalues();
  return op;
}

ChiSpectrumCheck chi_spectrum_check(const MatrixLieAlgebra& g, const Vec& z, double tol) {
  const OperatorAtZ op = psi_operators(g, z);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (op.chi + op.chi.transpose()), Eigen::EigenvaluesOnly);
  std::vector<double> got(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::vector<double> want;
  for (Eigen::Index i = 0; i < op.ad_eigenvalues.size(); ++i) {
    const double e = std::exp(op.ad_eigenvalues(i));
    want.push_back(std::isinf(e) ? 1.0 : (e - 1.0) / (e + 1.0));
  }
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  ChiSpectrumCheck res;
  for (size_t i = 0; i < got.size(); ++i) {
    res.multiset_error = std::max(res.multiset_error, std::abs(got[i] - want[i]));
    res.max_abs_eigenvalue = std::max(res.max_abs_eigenvalue, std::abs(got[i]));
  }
  res.pass = res.multiset_error < tol && res.max_abs_eigenvalue < 1.0;
  return res;
}

CMat exp_k(const MatrixLieAlgebra& g, const Vec& x) {
  const CMat X = g.element(x);
  CMat H = cplx(0.0, -1.0) * X;
  H = 0.5 * (H + H.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMat> es(H);
  CVec d(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::exp(cplx(0.0, es.eigenvalues()(i)));
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

CMat exp_p(const MatrixLieAlgebra& g, const Vec& z) {
  CMat Z = g.element(z);
  Z = 0.5 * (Z + Z.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMat> es(Z);
  CVec d(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::exp(es.eigenvalues()(i));
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

CMat exp_element(const MatrixLieAlgebra& g, const Vec& x) {
  const CMat X = g.element(x);
  return X.exp();
}

CMat log_near_identity(const CMat& u) { return u.log(); }

double unitarity_residual(const CMat& k) {
  const Eigen::Index n = k.rows();
  return (k.adjoint() * k - CMat::Identity(n, n)).cwiseAbs().maxCoeff();
}

CMat polar_project(const CMat& k) {
  Eigen::JacobiSVD<CMat> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

Vec coadjoint_action(const MatrixLieAlgebra& g, const CMat& grp, const Vec& xi) {
  return g.adjoint_group(grp.inverse()).transpose() * xi;
}

Vec gamma_map(const MatrixLieAlgebra& g, const CMat& k, const Vec& lambda, const Vec& z) {
  const double res = unitarity_residual(k);
  if (res > 1e-10) {
    std::ostringstream os;
    os << "group element is off K (unitarity residual " << res << ")";
    throw NumericalError(os.str());
  }
  require_p(g, z);
  return coadjoint_action(g, exp_p(g, z) * k, lambda);
}

GammaTangent d_gamma(const MatrixLieAlgebra& g, const CMat& k, const Vec& z, const Vec& x,
                     const Vec& a) {
  const OperatorAtZ op = psi_operators(g, z);
  GammaTangent t;
  t.base = exp_p(g, z) * k;
  t.direction = x + g.adjoint_group(k.adjoint()) * (op.psi * a);
  return t;
}

Vec tangent_to_coadjoint(const MatrixLieAlgebra& g, const CMat& base, const Vec& direction,
                         const Vec& lambda) {
  const Mat M = g.adjoint_matrix(direction);
  return g.adjoint_group(base.inverse()).transpose() * (-(M.transpose() * lambda));
}

} // namespace hcorbit
