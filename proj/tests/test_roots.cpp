#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hcorbit/roots.hpp"
#include "support.hpp"

#include <cmath>

using namespace hcorbit;
using namespace testsupport;

namespace {

// Spectral norm of M_ij = B_theta(H, [e_i, e_j]) from ambient commutators.
double bracket_norm_oracle(const MatrixLieAlgebra& g, const Vec& h) {
  const int n = g.dim();
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = h.dot(ambient_bracket(g, Vec::Unit(n, i), Vec::Unit(n, j)));
  return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

} // namespace

TEST_CASE("root counts") {
  struct Expect {
    AlgebraSpec spec;
    int roots, compact, positive_noncompact;
  };
  for (const auto& e : {Expect{AlgebraSpec::su(1, 1), 2, 0, 1}, Expect{AlgebraSpec::su(2, 1), 6, 2, 2},
                        Expect{AlgebraSpec::sp(1), 2, 0, 1}, Expect{AlgebraSpec::sp(2), 8, 2, 3},
                        Expect{AlgebraSpec::su(2, 2), 12, 4, 4}}) {
    CAPTURE(e.spec.name());
    const auto g = build_algebra(e.spec);
    const auto d = compute_root_datum(g);
    CHECK(static_cast<int>(d.roots.size()) == e.roots);
    CHECK(static_cast<int>(d.roots.size()) == g.dim() - g.torus_rank());
    CHECK(d.compact_count() == e.compact);
    CHECK(static_cast<int>(d.positive_noncompact().size()) == e.positive_noncompact);
  }
}

TEST_CASE("roots come in +- pairs with opposite signs") {
  for (const auto& s : desk_algebras()) {
    const auto g = build_algebra(s);
    const auto d = compute_root_datum(g);
    for (const Root& a : d.roots) {
      int partners = 0;
      for (const Root& b : d.roots)
        if ((a.values + b.values).norm() < 1e-9) {
          ++partners;
          CHECK(a.positive != b.positive);
          CHECK(a.compact == b.compact);
        }
      CHECK(partners == 1);
    }
  }
}

TEST_CASE("root vectors diagonalize the torus") {
  for (const auto& s : desk_algebras()) {
    const auto g = build_algebra(s);
    const auto d = compute_root_datum(g);
    CHECK(d.root_vector_residual < 1e-9);
    for (const Root& a : d.roots) {
      for (int j = 0; j < g.torus_rank(); ++j) {
        const Mat ad = g.adjoint_matrix(Vec::Unit(g.dim(), j));
        const CVec lhs = ad.cast<cplx>() * a.vector;
        CHECK((lhs - cplx(0.0, a.values(j)) * a.vector).norm() < 1e-9);
      }
      // B_theta(E + conj E, E + conj E) = 2 and likewise for i(E - conj E)
      const Vec re = (a.vector + a.vector.conjugate()).real();
      const Vec im = (cplx(0.0, 1.0) * (a.vector - a.vector.conjugate())).real();
      CHECK(re.squaredNorm() == doctest::Approx(2.0).epsilon(1e-9));
      CHECK(im.squaredNorm() == doctest::Approx(2.0).epsilon(1e-9));
      // compact roots live in k, noncompact in p
      const double k_weight = a.vector.head(g.dim_k()).norm();
      CHECK(std::abs(k_weight - (a.compact ? 1.0 : 0.0)) < 1e-9);
    }
  }
}

TEST_CASE("z0 certificate") {
  for (const auto& s : desk_algebras()) {
    CAPTURE(s.name());
    const auto g = build_algebra(s);
    const auto d = compute_root_datum(g);
    const Mat ad = g.adjoint_matrix(d.z0);
    const Mat sq = ad.bottomRightCorner(g.dim_p(), g.dim_p()) * ad.bottomRightCorner(g.dim_p(), g.dim_p());
    CHECK((sq + Mat::Identity(g.dim_p(), g.dim_p())).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(d.z0.tail(g.dim_p()).norm() < 1e-14);
    // central in k
    Gen gen(21);
    for (int i = 0; i < 5; ++i) CHECK(g.bracket(d.z0, gen.k_element(g, 1.0)).norm() < 1e-12);
    for (const Root& a : d.roots) {
      const double v = a.values.dot(d.z0_torus);
      if (a.compact) CHECK(std::abs(v) < 1e-10);
      else CHECK(std::abs(std::abs(v) - 1.0) < 1e-10);
      if (!a.compact && a.positive) CHECK(std::abs(v - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("su(1,1): z0 = (i/2) diag(1,-1)") {
  const auto g = build_algebra(AlgebraSpec::su(1, 1));
  const auto d = compute_root_datum(g);
  CMat expect = CMat::Zero(2, 2);
  expect(0, 0) = cplx(0.0, 0.5);
  expect(1, 1) = cplx(0.0, -0.5);
  CHECK((g.element(d.z0) - expect).norm() < 1e-12);
}

TEST_CASE("weights are dual to the torus basis") {
  Gen gen(22);
  for (const auto& s : desk_algebras()) {
    const auto g = build_algebra(s);
    for (int i = 0; i < 5; ++i) {
      const Vec c = gen.gaussian(g.torus_rank());
      const ChamberWeight w = make_weight(g, c);
      for (int j = 0; j < g.torus_rank(); ++j)
        CHECK(g.b_theta(w.h, Vec::Unit(g.dim(), j)) == doctest::Approx(c(j)).epsilon(1e-12));
    }
  }
}

TEST_CASE("chamber membership") {
  const auto g = build_algebra(AlgebraSpec::su(2, 1));
  const auto d = compute_root_datum(g);
  const ChamberWeight l0 = weight_lambda0(g, d);
  const ChamberTest t0 = in_holomorphic_chamber(l0, d);
  CHECK(t0.inside);
  CHECK(t0.margin == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(in_holomorphic_chamber(make_weight(g, -l0.torus), d).inside);

  // H = i diag(h1, h2, h3): noncompact roots give h_j - h_3 for j = 1, 2
  const std::vector<double> h{0.6, 0.1, -0.7};
  const ChamberTest t = in_holomorphic_chamber(weight_from_diagonal(g, h), d);
  CHECK(t.inside);
  CHECK(t.margin == doctest::Approx(std::min(h[0] - h[2], h[1] - h[2])).epsilon(1e-12));
  CHECK(t.compact_margin == doctest::Approx(h[0] - h[1]).epsilon(1e-12));
  CHECK_THROWS_AS(chamber_constants(g, make_weight(g, -l0.torus), d), DomainError);
}

TEST_CASE("chamber constants at lambda0 and under scaling") {
  for (const auto& s : desk_algebras()) {
    CAPTURE(s.name());
    const auto g = build_algebra(s);
    const auto d = compute_root_datum(g);
    const ChamberWeight l0 = weight_lambda0(g, d);
    const ChamberConstants c = chamber_constants(g, l0, d);
    CHECK(c.m == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.b == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.b == doctest::Approx(bracket_norm_oracle(g, l0.h)).epsilon(1e-12));
    const ChamberConstants c2 = chamber_constants(g, make_weight(g, 2.0 * l0.torus), d);
    CHECK(c2.m == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c2.b == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("property: chamber constants are positively homogeneous") {
  Gen gen(23);
  for (const auto& s : desk_algebras()) {
    const auto g = build_algebra(s);
    const auto d = compute_root_datum(g);
    for (int i = 0; i < 20; ++i) {
      const ChamberWeight w = gen.chamber_weight(g, d);
      const double c = gen.uniform(0.1, 5.0);
      const ChamberConstants a = chamber_constants(g, w, d);
      const ChamberConstants b = chamber_constants(g, make_weight(g, c * w.torus), d);
      CHECK(std::abs(b.m - c * a.m) < 1e-10);
      CHECK(std::abs(b.b - c * a.b) < 1e-10);
      CHECK(a.b == doctest::Approx(bracket_norm_oracle(g, w.h)).epsilon(1e-10));
    }
  }
}

TEST_CASE("stabilizers") {
  const auto g = build_algebra(AlgebraSpec::su(2, 1));
  const auto d = compute_root_datum(g);
  const StabilizerSplit s0 = stabilizer_algebra(g, weight_lambda0(g, d));
  CHECK(s0.stabilizer.cols() == g.dim_k());
  CHECK(s0.complement.cols() == 0);
  const ChamberWeight w = weight_from_diagonal(g, {0.6, 0.1, -0.7});
  const StabilizerSplit s = stabilizer_algebra(g, w);
  CHECK(s.stabilizer.cols() == 2);
  CHECK(s.complement.cols() == 2);
  // stabilizer elements fix lambda: [X, H_lambda] = 0
  for (int j = 0; j < s.stabilizer.cols(); ++j) CHECK(g.bracket(s.stabilizer.col(j), w.h).norm() < 1e-12);
  const Mat all = (Mat(g.dim(), 4) << s.stabilizer, s.complement).finished();
  CHECK((all.transpose() * all - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

  Gen gen(24);
  const auto g1 = build_algebra(AlgebraSpec::su(1, 1));
  const auto d1 = compute_root_datum(g1);
  CHECK(stabilizer_algebra(g1, gen.chamber_weight(g1, d1)).stabilizer.cols() == 1);
}
