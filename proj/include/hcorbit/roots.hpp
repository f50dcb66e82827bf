#pragma once

#include "hcorbit/lie_algebra.hpp"

#include <vector>

namespace hcorbit {

/// A root alpha of g relative to the maximal torus t of k, with
/// [H, E] = i alpha(H) E for every H in t.
struct Root {
  Vec values;      // alpha(h_j) on the orthonormal torus basis h_1..h_r
  bool compact = false;
  bool positive = false;
  CVec vector;     // E_alpha in complexified coordinates, unit Hermitian norm
};

/// Root decomposition of g with respect to t, z0 and the induced positive system.
struct RootDatum {
  int rank = 0;
  std::vector<Root> roots; // sorted: compact first, each group lexicographically descending
  Vec z0;                  // element of the center of k (g-coordinates)
  Vec z0_torus;            // z0 in torus coordinates
  Vec lambda0;             // functional B_theta(z0, .) as coefficient vector

  std::vector<const Root*> positive_noncompact() const;
  std::vector<const Root*> positive_compact() const;
  int compact_count() const;
  int noncompact_count() const;

  // Diagnostics, filled by compute_root_datum.
  double z0_square_residual = 0.0;  // || ad(z0)^2|_p + id ||
  double root_vector_residual = 0.0;
};

/// Element lambda of t^* given by its values c_j = <lambda, h_j> on the
/// orthonormal torus basis.
struct ChamberWeight {
  Vec torus;   // r coordinates
  Vec h;       // H_lambda in g-coordinates; B_theta(H_lambda, X) = <lambda, X>
  Vec coadjoint() const { return h; }
};

ChamberWeight make_weight(const MatrixLieAlgebra& g, const Vec& torus_coords);
/// lambda0, the weight dual to z0.
ChamberWeight weight_lambda0(const MatrixLieAlgebra& g, const RootDatum& datum);
/// Weight whose dual H_lambda is the diagonal torus element with entries
/// `diag` (su: H = i diag(diag); sp: H = [[0, D], [-D, 0]]).
ChamberWeight weight_from_diagonal(const MatrixLieAlgebra& g, const std::vector<double>& diag);

/// Throws NumericalError if no z0 exists or the simultaneous diagonalization degenerates.
RootDatum compute_root_datum(const MatrixLieAlgebra& g);

struct ChamberTest {
  bool inside = false;
  double margin = 0.0;          // min over positive noncompact beta of beta(H_lambda)
  double compact_margin = 0.0;  // min over positive compact alpha of alpha(H_lambda)
};

ChamberTest in_holomorphic_chamber(const ChamberWeight& lambda, const RootDatum& datum);

struct ChamberConstants {
  double m = 0.0; // min beta(H_lambda)
  double b = 0.0; // sup <lambda, [u, v]> over unit u, v in g
};

/// Throws DomainError when lambda is outside the holomorphic chamber.
ChamberConstants chamber_constants(const MatrixLieAlgebra& g, const ChamberWeight& lambda,
                                   const RootDatum& datum);

/// k_lambda and its B_theta-orthogonal complement in k, as orthonormal columns
/// of g-coordinates.
struct StabilizerSplit {
  Mat stabilizer;
  Mat complement;
};

StabilizerSplit stabilizer_algebra(const MatrixLieAlgebra& g, const ChamberWeight& lambda);

} // namespace hcorbit
