#pragma once

// Hand-rolled generators and independent oracles shared by the unit suites.

#include "hcorbit/types.hpp"
#include "hcorbit/lie_algebra.hpp"
#include "hcorbit/roots.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <random>
#include <vector>

namespace testsupport {

using hcorbit::AlgebraSpec;
using hcorbit::CMat;
using hcorbit::Mat;
using hcorbit::MatrixLieAlgebra;
using hcorbit::Vec;

inline std::vector<AlgebraSpec> desk_algebras() {
  return {AlgebraSpec::su(1, 1), AlgebraSpec::su(2, 1), AlgebraSpec::sp(1), AlgebraSpec::sp(2)};
}

class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a = 0.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

  Vec gaussian(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = normal();
    return v;
  }
  Vec unit(int n) { return gaussian(n).normalized(); }

  /// p-coordinates with norm uniform in (0, radius].
  Vec p_coords(const MatrixLieAlgebra& g, double radius) {
    return unit(g.dim_p()) * radius * uniform(0.05, 1.0);
  }
  /// g-coordinates of a p-element.
  Vec p_element(const MatrixLieAlgebra& g, double radius) { return g.embed_p(p_coords(g, radius)); }
  Vec k_element(const MatrixLieAlgebra& g, double scale) { return g.embed_k(gaussian(g.dim_k()) * scale); }
  Vec element(const MatrixLieAlgebra& g) { return gaussian(g.dim()); }

  /// Group element of K as the exponential of a random k-element (Eigen's
  /// general matrix exponential, not the library's spectral one).
  CMat k_group(const MatrixLieAlgebra& g, double scale = 1.0) {
    return CMat(g.element(k_element(g, scale))).exp();
  }

  /// Weight strictly inside the holomorphic chamber: lambda0 scaled, plus a
  /// perturbation, kept when every positive root margin exceeds 1e-3.
  hcorbit::ChamberWeight chamber_weight(const MatrixLieAlgebra& g, const hcorbit::RootDatum& d) {
    for (;;) {
      const Vec c = uniform(0.3, 3.0) * d.z0_torus + 0.4 * d.z0_torus.norm() * gaussian(g.torus_rank());
      const hcorbit::ChamberWeight w = hcorbit::make_weight(g, c);
      const hcorbit::ChamberTest t = hcorbit::in_holomorphic_chamber(w, d);
      if (t.margin > 1e-3 && t.compact_margin > 1e-3) return w;
    }
  }

  std::mt19937_64& engine() { return rng_; }

private:
  std::mt19937_64 rng_;
};

/// int_0^1 e^{-s A} ds through the block exponential exp([[-A, I], [0, 0]]).
inline Mat integral_of_exp(const Mat& a) {
  const Eigen::Index n = a.rows();
  Mat big = Mat::Zero(2 * n, 2 * n);
  big.topLeftCorner(n, n) = -a;
  big.topRightCorner(n, n).setIdentity();
  const Mat e = big.exp();
  return e.topRightCorner(n, n);
}

/// [X, Y] computed on ambient matrices, then mapped back to coordinates.
inline Vec ambient_bracket(const MatrixLieAlgebra& g, const Vec& x, const Vec& y) {
  const CMat X = g.element(x), Y = g.element(y);
  return g.coords(X * Y - Y * X);
}

/// Ad(g) x computed on ambient matrices.
inline Vec ambient_adjoint(const MatrixLieAlgebra& g, const CMat& grp, const Vec& x) {
  return g.coords(grp * g.element(x) * grp.inverse());
}

} // namespace testsupport
