#include "hcorbit/lie_algebra.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace hcorbit {

namespace {

CMat unit(int n, int r, int c) {
  CMat E = CMat::Zero(n, n);
  E(r, c) = 1.0;
  return E;
}

const cplx I_unit{0.0, 1.0};

struct RawBasis {
  std::vector<CMat> k; // torus first
  std::vector<CMat> p;
  int torus_rank = 0;
};

RawBasis su_raw(int p, int q) {
  const int n = p + q;
  RawBasis raw;
  // Maximal torus: i diag(0,..,0, n-m, -1, .., -1); the positive system it
  // induces lexicographically is the standard e_j - e_l, j < l.
  for (int m = 0; m < n - 1; ++m) {
    CMat H = CMat::Zero(n, n);
    H(m, m) = I_unit * double(n - m - 1);
    for (int j = m + 1; j < n; ++j) H(j, j) = -I_unit;
    raw.k.push_back(H);
  }
  raw.torus_rank = n - 1;
  auto same_block = [p](int j, int l) { return (j < p) == (l < p); };
  for (int j = 0; j < n; ++j)
    for (int l = j + 1; l < n; ++l)
      if (same_block(j, l)) {
        raw.k.push_back(unit(n, j, l) - unit(n, l, j));
        raw.k.push_back(I_unit * (unit(n, j, l) + unit(n, l, j)));
      }
  for (int j = 0; j < p; ++j)
    for (int l = p; l < n; ++l) {
      raw.p.push_back(unit(n, j, l) + unit(n, l, j));
      raw.p.push_back(I_unit * (unit(n, j, l) - unit(n, l, j)));
    }
  return raw;
}

// Embeds real n x n blocks into [[A, B], [C, D]].
CMat blocks(const CMat& A, const CMat& B, const CMat& C, const CMat& D) {
  const int n = static_cast<int>(A.rows());
  CMat X(2 * n, 2 * n);
  X << A, B, C, D;
  return X;
}

RawBasis sp_raw(int n) {
  RawBasis raw;
  const CMat Z = CMat::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    const CMat E = unit(n, m, m);
    raw.k.push_back(blocks(Z, E, -E, Z));
  }
  raw.torus_rank = n;
  for (int j = 0; j < n; ++j)
    for (int l = j + 1; l < n; ++l) {
      const CMat S = unit(n, j, l) + unit(n, l, j);
      const CMat A = unit(n, j, l) - unit(n, l, j);
      raw.k.push_back(blocks(Z, S, -S, Z));
      raw.k.push_back(blocks(A, Z, Z, A));
    }
  for (int j = 0; j < n; ++j)
    for (int l = j; l < n; ++l) {
      const CMat S = (j == l) ? unit(n, j, j) : CMat(unit(n, j, l) + unit(n, l, j));
      raw.p.push_back(blocks(S, Z, Z, -S));
      raw.p.push_back(blocks(Z, S, S, Z));
    }
  return raw;
}

} // namespace

std::string AlgebraSpec::name() const {
  std::ostringstream os;
  if (family == Family::SpecialUnitary)
    os << "su(" << p << "," << q << ")";
  else
    os << "sp(" << 2 * n << ",R)";
  return os.str();
}

int AlgebraSpec::matrix_size() const {
  return family == Family::SpecialUnitary ? p + q : 2 * n;
}

Vec real_vec(const CMat& X) {
  const Eigen::Index m = X.size();
  Vec v(2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    v(i) = X.data()[i].real();
    v(m + i) = X.data()[i].imag();
  }
  return v;
}

void MatrixLieAlgebra::set_basis(std::vector<CMat> basis) {
  basis_ = std::move(basis);
  const int N = dim();
  const int m = 2 * matrix_size_ * matrix_size_;
  real_basis_.resize(m, N);
  for (int i = 0; i < N; ++i) real_basis_.col(i) = real_vec(basis_[i]);
  coord_map_ = real_basis_.completeOrthogonalDecomposition().pseudoInverse();

  ad_basis_.assign(N, Mat::Zero(N, N));
  closure_residual_ = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const CMat br = basis_[i] * basis_[j] - basis_[j] * basis_[i];
      const Vec v = real_vec(br);
      const Vec c = coord_map_ * v;
      closure_residual_ = std::max(closure_residual_, (real_basis_ * c - v).norm());
      ad_basis_[i].col(j) = c;
    }

  killing_gram_.resize(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j)
      killing_gram_(i, j) = killing_gram_(j, i) = (ad_basis_[i] * ad_basis_[j]).trace();

  // B_theta(e_i, e_j) = -B_g(e_i, theta e_j)
  Mat theta(N, N);
  for (int j = 0; j < N; ++j) theta.col(j) = coords_unchecked(-basis_[j].adjoint());
  b_theta_gram_ = -killing_gram_ * theta;
  b_theta_gram_ = 0.5 * (b_theta_gram_ + b_theta_gram_.transpose()).eval();
}

Vec MatrixLieAlgebra::coords_unchecked(const CMat& X) const {
  return coord_map_ * real_vec(X);
}

double MatrixLieAlgebra::membership_residual(const CMat& X) const {
  const Vec v = real_vec(X);
  return (real_basis_ * (coord_map_ * v) - v).norm();
}

Vec MatrixLieAlgebra::coords(const CMat& X) const {
  const Vec v = real_vec(X);
  const Vec c = coord_map_ * v;
  const double res = (real_basis_ * c - v).norm();
  if (res > 1e-8 * std::max(1.0, v.norm())) {
    std::ostringstream os;
    os << "matrix is not in " << spec_.name() << " (projection residual " << res << ")";
    throw DomainError(os.str());
  }
  return c;
}

CMat MatrixLieAlgebra::element(const Vec& x) const {
  CMat X = CMat::Zero(matrix_size_, matrix_size_);
  for (int i = 0; i < dim(); ++i)
    if (x(i) != 0.0) X += x(i) * basis_[i];
  return X;
}

Vec MatrixLieAlgebra::embed_k(const Vec& xk) const {
  Vec x = Vec::Zero(dim());
  x.head(dim_k()) = xk;
  return x;
}

Vec MatrixLieAlgebra::embed_p(const Vec& zp) const {
  Vec x = Vec::Zero(dim());
  x.tail(dim_p()) = zp;
  return x;
}

Mat MatrixLieAlgebra::adjoint_matrix(const Vec& x) const {
  const int N = dim();
  Mat M = Mat::Zero(N, N);
  for (int i = 0; i < N; ++i)
    if (x(i) != 0.0) M.noalias() += x(i) * ad_basis_[i];
  return M;
}

Vec MatrixLieAlgebra::bracket(const Vec& x, const Vec& y) const {
  return adjoint_matrix(x) * y;
}

Mat MatrixLieAlgebra::bracket_pairing(const Vec& xi) const {
  const int N = dim();
  Mat L(N, N);
  // L_ij = sum_k xi_k (ad e_i)_{kj}
  for (int i = 0; i < N; ++i) L.row(i) = xi.transpose() * ad_basis_[i];
  return L;
}

double MatrixLieAlgebra::killing_form(const Vec& x, const Vec& y) const {
  return x.dot(killing_gram_ * y);
}

double MatrixLieAlgebra::b_theta(const Vec& x, const Vec& y) const {
  return x.dot(b_theta_gram_ * y);
}

CMat MatrixLieAlgebra::cartan_involution(const CMat& X) const {
  (void)coords(X);
  return -X.adjoint();
}

Vec MatrixLieAlgebra::cartan_involution(const Vec& x) const {
  Vec y = x;
  y.tail(dim_p()) *= -1.0;
  return y;
}

Mat MatrixLieAlgebra::adjoint_group(const CMat& g) const {
  const int N = dim();
  const CMat ginv = g.inverse();
  Mat A(N, N);
  for (int j = 0; j < N; ++j) A.col(j) = coords_unchecked(g * basis_[j] * ginv);
  return A;
}

double MatrixLieAlgebra::orthonormality_residual() const {
  return (b_theta_gram_ - Mat::Identity(dim(), dim())).cwiseAbs().maxCoeff();
}

double MatrixLieAlgebra::jacobi_residual(int samples) const {
  const int N = dim();
  auto jac = [&](int a, int b, int c) {
    const Vec& ea = Vec::Unit(N, a);
    const Vec& eb = Vec::Unit(N, b);
    const Vec& ec = Vec::Unit(N, c);
    const Vec r = bracket(bracket(ea, eb), ec) + bracket(bracket(eb, ec), ea) +
                  bracket(bracket(ec, ea), eb);
    return r.norm();
  };
  double worst = 0.0;
  if (N <= 30) {
    for (int a = 0; a < N; ++a)
      for (int b = a + 1; b < N; ++b)
        for (int c = b + 1; c < N; ++c) worst = std::max(worst, jac(a, b, c));
  } else {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> pick(0, N - 1);
    for (int s = 0; s < samples; ++s) worst = std::max(worst, jac(pick(rng), pick(rng), pick(rng)));
  }
  return worst;
}

double MatrixLieAlgebra::cartan_inclusion_residual() const {
  const int N = dim();
  const int nk = dim_k();
  double worst = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const Vec& c = ad_basis_[i].col(j);
      const bool ik = i < nk;
      const bool jk = j < nk;
      // [k,k] and [p,p] land in k; mixed brackets land in p.
      const double wrong = (ik == jk) ? c.tail(N - nk).norm() : c.head(nk).norm();
      worst = std::max(worst, wrong);
    }
  return worst;
}

double MatrixLieAlgebra::involution_residual() const {
  double worst = 0.0;
  for (int i = 0; i < dim(); ++i) {
    const double sign = i < dim_k() ? 1.0 : -1.0;
    const CMat diff = -basis_[i].adjoint() - sign * basis_[i];
    worst = std::max(worst, diff.norm());
  }
  return worst;
}

MatrixLieAlgebra build_algebra(const AlgebraSpec& spec) {
  RawBasis raw;
  switch (spec.family) {
  case Family::SpecialUnitary:
    if (spec.p < 1 || spec.q < 1)
      throw DomainError("su(p,q) requires p >= 1 and q >= 1 (q = 0 gives a compact algebra)");
    if (spec.p < spec.q) throw DomainError("su(p,q) requires p >= q");
    raw = su_raw(spec.p, spec.q);
    break;
  case Family::Symplectic:
    if (spec.n < 1) throw DomainError("sp(2n,R) requires n >= 1");
    raw = sp_raw(spec.n);
    break;
  default:
    throw DomainError("unsupported algebra family");
  }

  MatrixLieAlgebra g;
  g.spec_ = spec;
  g.matrix_size_ = spec.matrix_size();
  std::vector<CMat> provisional = raw.k;
  provisional.insert(provisional.end(), raw.p.begin(), raw.p.end());
  g.set_basis(provisional);
  if (g.closure_residual_ > tol::kIdentity)
    throw NumericalError("spanning set is not closed under the bracket");

  // Gram-Schmidt against B_theta in the given order: k (torus first), then p.
  const int N = g.dim();
  const Mat& G = g.b_theta_gram_;
  Eigen::SelfAdjointEigenSolver<Mat> pd(G);
  if (pd.eigenvalues().minCoeff() <= 0.0)
    throw NumericalError("B_theta is not positive definite on the spanning set");
  Mat T = Mat::Identity(N, N); // columns: new basis in provisional coordinates
  for (int i = 0; i < N; ++i) {
    Vec v = T.col(i);
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < i; ++j) v -= T.col(j).dot(G * v) * T.col(j);
    const double nrm = std::sqrt(v.dot(G * v));
    if (nrm < 1e-12) throw NumericalError("linearly dependent spanning set");
    T.col(i) = v / nrm;
  }
  std::vector<CMat> ortho(N);
  for (int i = 0; i < N; ++i) {
    ortho[i] = CMat::Zero(g.matrix_size_, g.matrix_size_);
    for (int j = 0; j < N; ++j)
      if (T(j, i) != 0.0) ortho[i] += T(j, i) * provisional[j];
  }
  g.set_basis(std::move(ortho));

  g.cartan_.dim_k = static_cast<int>(raw.k.size());
  g.cartan_.dim_p = static_cast<int>(raw.p.size());
  g.cartan_.torus_rank = raw.torus_rank;
  for (int i = 0; i < N; ++i)
    (i < g.cartan_.dim_k ? g.cartan_.k_indices : g.cartan_.p_indices).push_back(i);

  if (g.orthonormality_residual() > tol::kOrthonormal)
    throw NumericalError("B_theta basis failed to orthonormalize");
  if (g.involution_residual() > tol::kOrthonormal)
    throw NumericalError("basis is not adapted to the Cartan involution");
  if (g.dim_p() == 0) throw DomainError("algebra has trivial p");
  return g;
}

} // namespace hcorbit
