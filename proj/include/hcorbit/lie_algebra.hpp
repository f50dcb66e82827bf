#pragma once

#include "hcorbit/types.hpp"

#include <string>
#include <vector>

namespace hcorbit {

enum class Family {
  SpecialUnitary, // su(p,q), p >= q >= 1
  Symplectic,     // sp(2n, R), n >= 1
};

/// Which concrete matrix algebra to build.
struct AlgebraSpec {
  Family family = Family::SpecialUnitary;
  int p = 1;
  int q = 1;
  int n = 1;

  static AlgebraSpec su(int p, int q) { return {Family::SpecialUnitary, p, q, 0}; }
  static AlgebraSpec sp(int n) { return {Family::Symplectic, 0, 0, n}; }

  std::string name() const;
  int matrix_size() const;
};

/// Index lists of the k- and p-parts of the orthonormal basis.
/// The basis is ordered k first (maximal torus leading), then p.
struct CartanData {
  std::vector<int> k_indices;
  std::vector<int> p_indices;
  int dim_k = 0;
  int dim_p = 0;
  int torus_rank = 0;
};

/// Real semisimple matrix Lie algebra g with a B_theta-orthonormal basis
/// adapted to the Cartan decomposition g = k + p.
///
/// Elements of g are carried as coordinate vectors against the basis;
/// `element` and `coords` convert to and from ambient complex matrices.
/// Immutable after construction.
class MatrixLieAlgebra {
public:
  const AlgebraSpec& spec() const { return spec_; }
  int matrix_size() const { return matrix_size_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const CartanData& cartan() const { return cartan_; }
  int dim_k() const { return cartan_.dim_k; }
  int dim_p() const { return cartan_.dim_p; }
  int torus_rank() const { return cartan_.torus_rank; }

  const std::vector<CMat>& basis() const { return basis_; }

  /// Coordinates of an ambient matrix. Throws DomainError when X is not in g.
  Vec coords(const CMat& X) const;
  /// Coordinates without the membership check.
  Vec coords_unchecked(const CMat& X) const;
  /// Distance from X to g in the ambient Frobenius norm.
  double membership_residual(const CMat& X) const;
  CMat element(const Vec& x) const;

  // Block helpers (k first, then p).
  Vec k_part(const Vec& x) const { return x.head(dim_k()); }
  Vec p_part(const Vec& x) const { return x.tail(dim_p()); }
  Vec embed_k(const Vec& xk) const;
  Vec embed_p(const Vec& zp) const;

  /// Structure constants: ad_basis()[i] is the matrix of ad(e_i), so
  /// c_{ij}^k = ad_basis()[i](k, j).
  const std::vector<Mat>& ad_basis() const { return ad_basis_; }
  double structure_constant(int i, int j, int k) const { return ad_basis_[i](k, j); }

  /// Matrix of ad(x) in the orthonormal basis.
  Mat adjoint_matrix(const Vec& x) const;
  Vec bracket(const Vec& x, const Vec& y) const;
  /// Skew matrix L_ij = <xi, [e_i, e_j]> for a functional with coefficients xi.
  Mat bracket_pairing(const Vec& xi) const;

  double killing_form(const Vec& x, const Vec& y) const;
  double b_theta(const Vec& x, const Vec& y) const;
  const Mat& killing_gram() const { return killing_gram_; }
  const Mat& b_theta_gram() const { return b_theta_gram_; }

  /// theta(X) = -X^dagger on ambient matrices. Throws DomainError if X is not in g.
  CMat cartan_involution(const CMat& X) const;
  Vec cartan_involution(const Vec& x) const;

  /// Matrix of Ad(g) for an invertible ambient matrix g of the group.
  Mat adjoint_group(const CMat& g) const;

  // Structural diagnostics.
  double closure_residual() const { return closure_residual_; }
  double orthonormality_residual() const;
  /// Max Jacobi residual; all triples when dim <= 30, else `samples` seeded triples.
  double jacobi_residual(int samples = 2000) const;
  /// Max norm of the components of [k,k], [p,p], [k,p] landing in the wrong block.
  double cartan_inclusion_residual() const;
  double involution_residual() const;

private:
  friend MatrixLieAlgebra build_algebra(const AlgebraSpec& spec);
  MatrixLieAlgebra() = default;
  void set_basis(std::vector<CMat> basis);

  AlgebraSpec spec_;
  int matrix_size_ = 0;
  std::vector<CMat> basis_;
  Mat real_basis_;    // vec(e_i) in R^{2 n^2}, one column per element
  Mat coord_map_;     // left inverse of real_basis_
  std::vector<Mat> ad_basis_;
  Mat killing_gram_;
  Mat b_theta_gram_;
  CartanData cartan_;
  double closure_residual_ = 0.0;
};

/// Builds su(p,q) or sp(2n,R). Throws DomainError for unsupported parameters
/// (q = 0, p < q, n = 0, ...) and NumericalError if the construction fails its
/// own structural checks.
MatrixLieAlgebra build_algebra(const AlgebraSpec& spec);

/// Real vectorization [Re X; Im X] (column-major) of an ambient matrix.
Vec real_vec(const CMat& X);

} // namespace hcorbit
