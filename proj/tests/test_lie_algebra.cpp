#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace hcorbit;
using namespace testsupport;

namespace {

struct Dims {
  int n, k, p;
};

// Dimension count by hand: su(p,q) is traceless anti-Hermitian-with-signature,
// sp(2n,R) has k = u(n) and p = symmetric complex n x n.
Dims expected_dims(const AlgebraSpec& s) {
  if (s.family == Family::SpecialUnitary) {
    const int m = s.p + s.q;
    return {m * m - 1, s.p * s.p + s.q * s.q - 1, 2 * s.p * s.q};
  }
  return {s.n * (2 * s.n + 1), s.n * s.n, s.n * (s.n + 1)};
}

// Trace-form constant of the Killing form: 2(p+q) for su(p,q), 2n+2 for sp(2n,R).
double killing_constant(const AlgebraSpec& s) {
  return s.family == Family::SpecialUnitary ? 2.0 * (s.p + s.q) : 2.0 * s.n + 2.0;
}

} // namespace

TEST_CASE("dimensions match the hand count") {
  for (const auto& s : {AlgebraSpec::su(1, 1), AlgebraSpec::su(2, 1), AlgebraSpec::su(2, 2), AlgebraSpec::su(3, 1),
                        AlgebraSpec::sp(1), AlgebraSpec::sp(2), AlgebraSpec::sp(3)}) {
    CAPTURE(s.name());
    const auto g = build_algebra(s);
    const Dims d = expected_dims(s);
    CHECK(g.dim() == d.n);
    CHECK(g.dim_k() == d.k);
    CHECK(g.dim_p() == d.p);
  }
}

TEST_CASE("su(1,1) and sp(2,R) have equal dimensions") {
  const auto a = build_algebra(AlgebraSpec::su(1, 1));
  const auto b = build_algebra(AlgebraSpec::sp(1));
  CHECK(a.dim() == 3);
  CHECK(b.dim() == 3);
  CHECK(a.dim_k() == b.dim_k());
  CHECK(a.dim_p() == b.dim_p());
  CHECK(a.torus_rank() == b.torus_rank());
}

TEST_CASE("unsupported parameters are rejected") {
  CHECK_THROWS_AS(build_algebra(AlgebraSpec::su(1, 0)), DomainError);
  CHECK_THROWS_AS(build_algebra(AlgebraSpec::su(1, 2)), DomainError);
  CHECK_THROWS_AS(build_algebra(AlgebraSpec::sp(0)), DomainError);
}

TEST_CASE("structural residuals") {
  for (const auto& s : desk_algebras()) {
    CAPTURE(s.name());
    const auto g = build_algebra(s);
    CHECK(g.closure_residual() < 1e-10);
    CHECK(g.jacobi_residual() < 1e-10);
    CHECK(g.cartan_inclusion_residual() < 1e-10);
    CHECK(g.orthonormality_residual() < 1e-12);
    CHECK(g.involution_residual() < 1e-12);
    CHECK((g.b_theta_gram() - Mat::Identity(g.dim(), g.dim())).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("cartan involution") {
  Gen gen(11);
  for (const auto& s : desk_algebras()) {
    const auto g = build_algebra(s);
    const Vec xk = gen.k_element(g, 1.0);
    const Vec xp = gen.p_element(g, 1.0);
    const Vec x = gen.element(g);
    CHECK((g.cartan_involution(xk) - xk).norm() < 1e-14);
    CHECK((g.cartan_involution(xp) + xp).norm() < 1e-14);
    CHECK((g.cartan_involution(g.cartan_involution(x)) - x).norm() < 1e-14);
    // theta(X) = -X^dagger on the ambient matrices
    const CMat X = g.element(x);
    CHECK((g.cartan_involution(X) + X.adjoint()).norm() < 1e-14);
  }
}

TEST_CASE("killing form equals the trace form") {
  Gen gen(12);
  for (const auto& s : desk_algebras()) {
    CAPTURE(s.name());
    const auto g = build_algebra(s);
    const double c = killing_constant(s);
    for (int i = 0; i < 20; ++i) {
      const Vec x = gen.element(g), y = gen.element(g);
      const double trace = (g.element(x) * g.element(y)).trace().real();
      CHECK(g.killing_form(x, y) == doctest::Approx(c * trace).epsilon(1e-12));
      // trace of ad(x) ad(y) built from structure constants
      CHECK(g.killing_form(x, y) ==
            doctest::Approx((g.adjoint_matrix(x) * g.adjoint_matrix(y)).trace()).epsilon(1e-12));
    }
  }
}

TEST_CASE("b_theta agrees with the killing form up to sign on the split") {
  Gen gen(13);
  for (const auto& s : desk_algebras()) {
    const auto g = build_algebra(s);
    for (int i = 0; i < 20; ++i) {
      const Vec a = gen.p_element(g, 2.0), b = gen.p_element(g, 2.0);
      const Vec u = gen.k_element(g, 1.0), v = gen.k_element(g, 1.0);
      CHECK(g.b_theta(a, b) == doctest::Approx(g.killing_form(a, b)).epsilon(1e-12));
      CHECK(g.b_theta(u, v) == doctest::Approx(-g.killing_form(u, v)).epsilon(1e-12));
      CHECK(g.b_theta(a, a) > 0.0);
    }
    for (int i = 0; i < g.dim(); ++i) CHECK(g.b_theta(Vec::Unit(g.dim(), i), Vec::Unit(g.dim(), i)) > 0.0);
  }
}

TEST_CASE("adjoint matrices: symmetric on p, skew on k, bracket on ambient matrices") {
  Gen gen(14);
  for (const auto& s : desk_algebras()) {
    const auto g = build_algebra(s);
    CHECK(g.adjoint_matrix(Vec::Zero(g.dim())).norm() == 0.0);
    for (int i = 0; i < 25; ++i) {
      const Mat mp = g.adjoint_matrix(gen.p_element(g, 3.0));
      const Mat mk = g.adjoint_matrix(gen.k_element(g, 3.0));
      CHECK((mp - mp.transpose()).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((mk + mk.transpose()).cwiseAbs().maxCoeff() < 1e-10);
      const Vec x = gen.element(g), y = gen.element(g);
      CHECK((g.bracket(x, y) - ambient_bracket(g, x, y)).norm() < 1e-12);
    }
  }
}

TEST_CASE("property: the killing form is ad-invariant") {
  Gen gen(15);
  for (const auto& s : desk_algebras()) {
    const auto g = build_algebra(s);
    for (int i = 0; i < 200; ++i) {
      const Vec x = gen.element(g), y = gen.element(g), w = gen.element(g);
      const double r = g.killing_form(g.bracket(x, y), w) + g.killing_form(y, g.bracket(x, w));
      CHECK(std::abs(r) < 1e-10 * (1.0 + x.norm() * y.norm() * w.norm()));
    }
  }
}

TEST_CASE("property: Ad(k) is B_theta-orthogonal and matches ambient conjugation") {
  Gen gen(16);
  for (const auto& s : desk_algebras()) {
    const auto g = build_algebra(s);
    for (int i = 0; i < 20; ++i) {
      const CMat k = gen.k_group(g);
      const Mat ad = g.adjoint_group(k);
      CHECK((ad.transpose() * ad - Mat::Identity(g.dim(), g.dim())).cwiseAbs().maxCoeff() < 1e-12);
      const Vec x = gen.element(g);
      CHECK((ad * x - ambient_adjoint(g, k, x)).norm() < 1e-12);
    }
  }
}

TEST_CASE("coordinates round-trip and reject non-members") {
  Gen gen(17);
  const auto g = build_algebra(AlgebraSpec::su(2, 1));
  const Vec x = gen.element(g);
  CHECK((g.coords(g.element(x)) - x).norm() < 1e-13);
  CHECK_THROWS_AS(g.coords(CMat::Identity(3, 3)), DomainError);
  CHECK(g.membership_residual(CMat::Identity(3, 3)) > 0.1);
}
