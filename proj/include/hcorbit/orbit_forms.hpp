#pragma once

#include "hcorbit/operators.hpp"
#include "hcorbit/roots.hpp"

#include <functional>
#include <random>

namespace hcorbit {

/// Constants by which two displayed moment-map formulas must be scaled to
/// satisfy d<Phi, X> = i(X_M) Omega with X_M(x) = d/dt exp(tX) . x.
///   flat:    Phi(Z)(X) = <lambda0, [[X, Z], Z]>          needs factor 1/2
///   product: fiber term 1/2 Omega_p(v, [X, v])            needs factor -1
/// `calibrate_moment_conventions` measures both numerically.
struct MomentConventions {
  double flat_scale = 0.5;
  double product_fiber_scale = -1.0;
};
inline constexpr MomentConventions kMomentConventions{};

/// K.lambda x p with lambda in the holomorphic chamber.
///
/// A point is (k, Z) with k a representative in the matrix group K; tangent
/// vectors are (X, A) with X in the fixed complement k (-) k_lambda and
/// A in p. The X-part at k means d/dt k e^{tX} . lambda.
class OrbitModel {
public:
  OrbitModel(const MatrixLieAlgebra& g, const RootDatum& datum, const ChamberWeight& lambda);

  const MatrixLieAlgebra& algebra() const { return *g_; }
  const RootDatum& datum() const { return *datum_; }
  const ChamberWeight& weight() const { return weight_; }
  const Vec& lambda() const { return weight_.h; }
  const Vec& lambda0() const { return datum_->lambda0; }
  const Vec& z0() const { return datum_->z0; }
  double z0_norm() const { return datum_->z0.norm(); }

  const Mat& pairing() const { return pairing_; }   // <lambda, [e_i, e_j]>
  const Mat& pairing0() const { return pairing0_; } // <lambda0, [e_i, e_j]>
  const Mat& complement() const { return complement_; }
  const Mat& stabilizer() const { return stabilizer_; }

  int dim_base() const { return static_cast<int>(complement_.cols()); }
  int dim_fiber() const { return g_->dim_p(); }
  int dim_tangent() const { return dim_base() + dim_fiber(); }

  /// <lambda, [X, Y]> on the complement.
  const Mat& base_block() const { return base_block_; }
  /// Omega_p(A, B) = B_theta(A, ad(z0) B) on p-coordinates.
  const Mat& omega_p() const { return omega_p_; }

private:
  const MatrixLieAlgebra* g_;
  const RootDatum* datum_;
  ChamberWeight weight_;
  Mat pairing_;
  Mat pairing0_;
  Mat complement_;
  Mat stabilizer_;
  Mat base_block_;
  Mat omega_p_;
};

struct OrbitPoint {
  CMat k;
  Vec z; // p-coordinates
};

struct OrbitTangent {
  Vec x; // complement coordinates
  Vec a; // p-coordinates

  Vec stacked() const;
  static OrbitTangent split(const Vec& u, int dim_base);
};

enum class FormLabel { PullbackKKS, Product, Delta, Segment, ScaledHermitian, Flat, Rate };

const char* to_string(FormLabel label);

struct SkewForm {
  FormLabel label = FormLabel::Product;
  double t = 0.0;
  double delta = 0.0;
  Mat matrix;

  double operator()(const Vec& u, const Vec& v) const { return u.dot(matrix * v); }
  double skew_residual() const { return (matrix + matrix.transpose()).cwiseAbs().maxCoeff(); }
};

/// Per-point cache: Ad(k), k.lambda and the spectral decomposition of ad(Z),
/// so that Psi at any multiple sZ is cheap.
class PointFrame {
public:
  PointFrame(const OrbitModel& model, const OrbitPoint& point);

  const OrbitModel& model() const { return *model_; }
  const OrbitPoint& point() const { return point_; }
  const Mat& ad_k() const { return ad_k_; }
  const Vec& k_lambda() const { return k_lambda_; }
  const Mat& k_pairing() const { return k_pairing_; } // <k lambda, [e_i, e_j]>
  const AdSpectrum& spectrum() const { return spectrum_; }

  /// f(s ad Z) restricted to p-columns, N x dim p.
  template <class F>
  Mat fiber_columns(F f, double s) const {
    const Vec& nu = spectrum_.values();
    Vec d(nu.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = f(s * nu(i));
    return spectrum_.vectors() * (d.asDiagonal() * vt_p_);
  }

private:
  const OrbitModel* model_;
  OrbitPoint point_;
  Mat ad_k_;
  Vec k_lambda_;
  Mat k_pairing_;
  AdSpectrum spectrum_;
  Mat vt_p_; // V^T restricted to p-columns
};

// Form matrices in the tangent basis at (k, sZ). The `s` argument scales the
// fiber coordinate of the frame's point and defaults to the point itself.

Mat pullback_kks_matrix(const PointFrame& f, double s = 1.0);
Mat pullback_kks_unsplit_matrix(const PointFrame& f, double s = 1.0);
Mat product_matrix(const OrbitModel& model);
Mat delta_matrix(const PointFrame& f, double delta, double s = 1.0);
Mat segment_matrix(const PointFrame& f, double t, double delta, double s = 1.0);
/// Fiber block <lambda0, [Psi+_{tsZ} A, Psi+_{tsZ} B]> and its t-derivative.
Mat hermitian_fiber_matrix(const PointFrame& f, double t, double s = 1.0);
Mat hermitian_fiber_rate(const PointFrame& f, double t, double s = 1.0);

SkewForm form_pullback_kks(const OrbitModel& model, const OrbitPoint& point);
SkewForm form_product(const OrbitModel& model, const OrbitPoint& point);
double form_p(const OrbitModel& model, const Vec& a, const Vec& b);
/// Throws DomainError for delta <= 0.
SkewForm form_delta(const OrbitModel& model, const OrbitPoint& point, double delta);
/// t Omega^delta + (1 - t) Gamma^* Omega_{G.lambda}. Throws DomainError for
/// delta <= 0 or t outside [0, 1].
SkewForm form_segment(const OrbitModel& model, const OrbitPoint& point, double t, double delta);
/// Omega_t on p at Z: Gamma_0^* Omega_{G.lambda0} evaluated at tZ.
SkewForm hermitian_family(const OrbitModel& model, const Vec& z, double t);

/// Smallest singular value.
double nondegeneracy_margin(const Mat& form);
double nondegeneracy_margin(const SkewForm& form);

// Moment maps, as k-coordinate vectors.

/// (e^Z k lambda)|_k through the conjugation route.
Vec moment_pullback(const OrbitModel& model, const OrbitPoint& point);
Vec moment_pullback(const PointFrame& f);
/// k lambda + delta lambda0 o cosh(ad Z).
Vec moment_delta(const PointFrame& f, double delta);
Vec moment_delta(const OrbitModel& model, const OrbitPoint& point, double delta);
/// t Phi_pullback + (1 - t) Phi^delta. Pairs with form_segment at 1 - t.
Vec moment_segment(const PointFrame& f, double t, double delta);
Vec moment_segment(const OrbitModel& model, const OrbitPoint& point, double t, double delta);
/// <lambda0, [[X, Z], Z]> as displayed (unscaled).
Vec moment_flat(const OrbitModel& model, const Vec& z);
/// <xi, X> + 1/2 Omega_p(v, [X, v]) as displayed (unscaled).
Vec moment_product(const OrbitModel& model, const OrbitPoint& point);
/// Displayed formulas with the convention constants applied.
Vec moment_flat_normalized(const OrbitModel& model, const Vec& z);
Vec moment_product_normalized(const OrbitModel& model, const OrbitPoint& point);
/// (Phi_{Gamma_0}(tZ) - lambda0) / t^2, continuous at t = 0.
Vec hermitian_moment(const OrbitModel& model, const Vec& z, double t);

struct BracketInequalityResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// B_theta(H_lambda, ad(Z)^2 H_lambda') against min beta(H_lambda) beta(H_lambda') |Z|^2.
/// Throws DomainError if either weight is outside the chamber.
BracketInequalityResult bracket_inequality_check(const MatrixLieAlgebra& g, const RootDatum& datum,
                            const ChamberWeight& lambda, const ChamberWeight& lambda_prime,
                            const Vec& z); // z in p-coordinates

// Charts, group action and sampling.

/// (k exp(eps C x), z + eps a) for u = (x, a).
OrbitPoint chart_point(const OrbitModel& model, const OrbitPoint& base, const Vec& u, double eps = 1.0);
/// Inverse of chart_point to first order: (C^T log(k_base^-1 k), z - z_base).
Vec chart_coords(const OrbitModel& model, const OrbitPoint& base, const OrbitPoint& point);
/// k' . (k lambda, Z) = (k' k lambda, Ad(k') Z).
OrbitPoint act(const OrbitModel& model, const CMat& kprime, const OrbitPoint& point);
/// |k1 lambda - k2 lambda| + |Z1 - Z2|; independent of the representatives.
double point_distance(const OrbitModel& model, const OrbitPoint& a, const OrbitPoint& b);
/// Generator X_M of a k-element X (k-coordinates) in tangent coordinates.
Vec generator(const OrbitModel& model, const OrbitPoint& point, const Vec& xk);
/// Tangent vector (X, A) at `point` transported by k' to k' . point.
Vec transport(const OrbitModel& model, const CMat& kprime, const Vec& u);

CMat random_k(const MatrixLieAlgebra& g, std::mt19937_64& rng, double scale = 1.0);
Vec random_p(const MatrixLieAlgebra& g, std::mt19937_64& rng, double radius);
OrbitPoint random_point(const OrbitModel& model, std::mt19937_64& rng, double radius);
/// Chamber weight sampled by rejection from a box around lambda0.
ChamberWeight random_chamber_weight(const MatrixLieAlgebra& g, const RootDatum& datum,
                                    std::mt19937_64& rng);

// Moment-map identity.

using FormAt = std::function<Mat(const OrbitPoint&)>;
using MomentAt = std::function<Vec(const OrbitPoint&)>;

struct MomentIdentity {
  double residual = 0.0;  // max |d<Phi, X>(u) - Omega(X_M, u)|
  double fitted_scale = 1.0; // c minimizing |c d<Phi,X> - Omega(X_M, .)|
};

/// Central differences at step eps over every k-basis X and tangent direction u.
MomentIdentity moment_identity(const OrbitModel& model, const FormAt& form, const MomentAt& moment,
                               const OrbitPoint& point, double eps = 1e-5);

struct MomentCalibration {
  double flat_scale = 0.0;
  double product_fiber_scale = 0.0;
};

/// Fits both convention constants at seeded random points of the lambda0 model
/// (where only the fiber terms vary).
MomentCalibration calibrate_moment_conventions(const OrbitModel& model0, std::uint64_t seed,
                                               int points = 4);

} // namespace hcorbit
