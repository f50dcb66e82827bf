#include "hcorbit/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hcorbit {

namespace {

// Lexicographic comparison on torus values, treating |diff| < 1e-9 as equal.
int lex_compare(const Vec& a, const Vec& b) {
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    const double d = a(j) - b(j);
    if (std::abs(d) > 1e-9) return d > 0 ? 1 : -1;
  }
  return 0;
}

bool lex_positive(const Vec& a) { return lex_compare(a, Vec::Zero(a.size())) > 0; }

void canonical_phase(CVec& v) {
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  const cplx ph = std::conj(v(idx)) / std::abs(v(idx));
  v *= ph;
}

void canonical_signs(Mat& cols) {
  for (Eigen::Index c = 0; c < cols.cols(); ++c) {
    Eigen::Index idx = 0;
    cols.col(c).cwiseAbs().maxCoeff(&idx);
    if (cols(idx, c) < 0) cols.col(c) *= -1.0;
  }
}

// Orthonormal kernel / co-kernel split of a linear map given by its matrix.
void kernel_split(const Mat& A, Mat& kernel, Mat& range) {
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  const double thresh = std::max(tol::kRankRelative * smax, 1e-14);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > thresh) ++rank;
  const Mat& V = svd.matrixV();
  range = V.leftCols(rank);
  kernel = V.rightCols(V.cols() - rank);
  canonical_signs(range);
  canonical_signs(kernel);
}

std::vector<Root> diagonalize_block(const MatrixLieAlgebra& g, int start, int size, bool compact,
                                    const Vec& weights, double& residual) {
  const int r = g.torus_rank();
  const int N = g.dim();
  Mat Hstar = Mat::Zero(N, N);
  for (int j = 0; j < r; ++j) Hstar += weights(j) * g.ad_basis()[j];
  const Mat A = Hstar.block(start, start, size, size);
  const CMat herm = cplx(0.0, -1.0) * A.cast<cplx>();
  Eigen::SelfAdjointEigenSolver<CMat> es(herm);

  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<Root> roots;
  residual = 0.0;
  for (int a = 0; a < size; ++a) {
    if (std::abs(es.eigenvalues()(a)) < 1e-9 * scale) continue;
    CVec v = CVec::Zero(N);
    v.segment(start, size) = es.eigenvectors().col(a);
    v.normalize();
    canonical_phase(v);
    Root root;
    root.compact = compact;
    root.values.resize(r);
    for (int j = 0; j < r; ++j) {
      const CVec Hv = g.ad_basis()[j].cast<cplx>() * v;
      const cplx alpha = cplx(0.0, -1.0) * v.dot(Hv);
      root.values(j) = alpha.real();
      residual = std::max(residual, (Hv - cplx(0.0, root.values(j)) * v).norm());
    }
    root.vector = v;
    roots.push_back(std::move(root));
  }
  return roots;
}

Mat center_of_k(const MatrixLieAlgebra& g) {
  const int nk = g.dim_k();
  Mat M(nk * nk, nk);
  for (int i = 0; i < nk; ++i) {
    const Mat blk = g.ad_basis()[i].topLeftCorner(nk, nk);
    M.col(i) = Eigen::Map<const Vec>(blk.data(), nk * nk);
  }
  Mat kernel, range;
  kernel_split(M, kernel, range);
  return kernel; // k-coordinates
}

// Solves (sum_i x_i A_i)^2 = -id by Gauss-Newton least squares.
bool solve_complex_structure(const std::vector<Mat>& As, Vec& x_out, double& residual) {
  const int m = static_cast<int>(As.size());
  const int dp = static_cast<int>(As[0].rows());
  const Mat Id = Mat::Identity(dp, dp);
  auto assemble = [&](const Vec& x) {
    Mat S = Mat::Zero(dp, dp);
    for (int i = 0; i < m; ++i) S += x(i) * As[i];
    return S;
  };
  std::vector<Vec> starts;
  for (int i = 0; i < m; ++i) starts.push_back(Vec::Unit(m, i));
  starts.push_back(Vec::Ones(m));

  double best = std::numeric_limits<double>::infinity();
  for (const Vec& d : starts) {
    const Mat S = assemble(d);
    const Mat S2 = S * S;
    const double denom = S2.squaredNorm();
    if (denom < 1e-300) continue;
    const double c = -S2.trace() / denom;
    if (c <= 0) continue;
    Vec x = std::sqrt(c) * d;
    for (int it = 0; it < 50; ++it) {
      const Mat Sx = assemble(x);
      const Mat F = Sx * Sx + Id;
      if (F.cwiseAbs().maxCoeff() < 1e-14) break;
      Mat J(dp * dp, m);
      for (int i = 0; i < m; ++i) {
        const Mat dF = As[i] * Sx + Sx * As[i];
        J.col(i) = Eigen::Map<const Vec>(dF.data(), dp * dp);
      }
      const Vec step = J.colPivHouseholderQr().solve(-Eigen::Map<const Vec>(F.data(), dp * dp));
      x += step;
      if (step.norm() < 1e-16) break;
    }
    const Mat Sx = assemble(x);
    const double res = (Sx * Sx + Id).cwiseAbs().maxCoeff();
    if (res < best) {
      best = res;
      x_out = x;
    }
  }
  residual = best;
  return best < tol::kIdentity;
}

} // namespace

std::vector<const Root*> RootDatum::positive_noncompact() const {
  std::vector<const Root*> out;
  for (const auto& r : roots)
    if (!r.compact && r.positive) out.push_back(&r);
  return out;
}

std::vector<const Root*> RootDatum::positive_compact() const {
  std::vector<const Root*> out;
  for (const auto& r : roots)
    if (r.compact && r.positive) out.push_back(&r);
  return out;
}

int RootDatum::compact_count() const {
  return static_cast<int>(std::count_if(roots.begin(), roots.end(), [](const Root& r) { return r.compact; }));
}

int RootDatum::noncompact_count() const {
  return static_cast<int>(roots.size()) - compact_count();
}

RootDatum compute_root_datum(const MatrixLieAlgebra& g) {
  const int r = g.torus_rank();
  const int nk = g.dim_k();
  const int np = g.dim_p();
  const int N = g.dim();

  // The torus basis must be abelian and maximal in k.
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (g.ad_basis()[i].col(j).norm() > tol::kIdentity)
        throw NumericalError("torus basis is not abelian");
  {
    Mat stacked(r * nk, nk);
    for (int j = 0; j < r; ++j) stacked.middleRows(j * nk, nk) = g.ad_basis()[j].topLeftCorner(nk, nk);
    Mat kernel, range;
    kernel_split(stacked, kernel, range);
    if (kernel.cols() != r) throw NumericalError("torus is not maximal in k");
  }

  RootDatum datum;
  datum.rank = r;

  // Simultaneous diagonalization through a generic torus element; retried with
  // other weights if two roots collide on it.
  bool ok = false;
  for (int attempt = 0; attempt < 8 && !ok; ++attempt) {
    Vec w(r);
    for (int j = 0; j < r; ++j) w(j) = std::sqrt(2.0 + j + 0.7 * attempt) / (1.0 + 0.37 * j + 0.11 * attempt);
    double res_k = 0.0, res_p = 0.0;
    auto compact = diagonalize_block(g, 0, nk, true, w, res_k);
    auto noncompact = diagonalize_block(g, nk, np, false, w, res_p);
    const double res = std::max(res_k, res_p);
    if (res < 1e-9 && static_cast<int>(compact.size()) == nk - r &&
        static_cast<int>(noncompact.size()) == np) {
      datum.roots = std::move(compact);
      datum.roots.insert(datum.roots.end(), noncompact.begin(), noncompact.end());
      datum.root_vector_residual = res;
      ok = true;
    }
  }
  if (!ok) throw NumericalError("degenerate simultaneous diagonalization of the torus action");

  // z0: ad(z0)^2 = -id on p with z0 in the center of k.
  const Mat center = center_of_k(g);
  if (center.cols() == 0) throw NumericalError("k has trivial center: no z0 (not Hermitian)");
  std::vector<Mat> As;
  for (int c = 0; c < center.cols(); ++c) {
    const Mat ad = g.adjoint_matrix(g.embed_k(center.col(c)));
    As.push_back(ad.bottomRightCorner(np, np));
  }
  Vec x;
  double z_res = 0.0;
  if (!solve_complex_structure(As, x, z_res)) {
    std::ostringstream os;
    os << "no z0 with ad(z0)^2 = -id on p (residual " << z_res << "): algebra is not Hermitian";
    throw NumericalError(os.str());
  }
  datum.z0 = g.embed_k(center * x);
  if (datum.z0.segment(r, N - r).norm() > 1e-9) throw NumericalError("z0 does not lie in the torus");

  // Sign rule: the lexicographically largest noncompact root is positive.
  std::vector<Root*> nc;
  for (auto& root : datum.roots)
    if (!root.compact) nc.push_back(&root);
  const Root* top = *std::max_element(nc.begin(), nc.end(), [](const Root* a, const Root* b) {
    return lex_compare(a->values, b->values) < 0;
  });
  if (top->values.dot(datum.z0.head(r)) < 0) datum.z0 = -datum.z0;
  datum.z0_torus = datum.z0.head(r);
  datum.lambda0 = datum.z0;
  {
    const Mat ad = g.adjoint_matrix(datum.z0).bottomRightCorner(np, np);
    datum.z0_square_residual = (ad * ad + Mat::Identity(np, np)).cwiseAbs().maxCoeff();
  }

  for (auto& root : datum.roots) {
    if (root.compact)
      root.positive = lex_positive(root.values);
    else
      root.positive = root.values.dot(datum.z0_torus) > 0;
  }

  std::stable_sort(datum.roots.begin(), datum.roots.end(), [](const Root& a, const Root& b) {
    if (a.compact != b.compact) return a.compact;
    return lex_compare(a.values, b.values) > 0;
  });
  return datum;
}

ChamberWeight make_weight(const MatrixLieAlgebra& g, const Vec& torus_coords) {
  if (torus_coords.size() != g.torus_rank()) {
    std::ostringstream os;
    os << "weight needs " << g.torus_rank() << " torus coordinates, got " << torus_coords.size();
    throw DomainError(os.str());
  }
  ChamberWeight w;
  w.torus = torus_coords;
  w.h = Vec::Zero(g.dim());
  w.h.head(g.torus_rank()) = torus_coords;
  return w;
}

ChamberWeight weight_lambda0(const MatrixLieAlgebra& g, const RootDatum& datum) {
  return make_weight(g, datum.z0_torus);
}

ChamberWeight weight_from_diagonal(const MatrixLieAlgebra& g, const std::vector<double>& diag) {
  const auto& spec = g.spec();
  CMat H;
  if (spec.family == Family::SpecialUnitary) {
    if (static_cast<int>(diag.size()) != spec.p + spec.q)
      throw DomainError("diagonal weight needs p+q entries");
    H = CMat::Zero(spec.p + spec.q, spec.p + spec.q);
    for (size_t j = 0; j < diag.size(); ++j) H(j, j) = cplx(0.0, diag[j]);
  } else {
    const int n = spec.n;
    if (static_cast<int>(diag.size()) != n) throw DomainError("diagonal weight needs n entries");
    H = CMat::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
      H(j, n + j) = diag[j];
      H(n + j, j) = -diag[j];
    }
  }
  const Vec c = g.coords(H);
  const int r = g.torus_rank();
  if (c.tail(g.dim() - r).norm() > 1e-9) throw DomainError("diagonal element is not in the torus");
  return make_weight(g, c.head(r));
}

ChamberTest in_holomorphic_chamber(const ChamberWeight& lambda, const RootDatum& datum) {
  ChamberTest t;
  t.margin = std::numeric_limits<double>::infinity();
  t.compact_margin = std::numeric_limits<double>::infinity();
  for (const Root* b : datum.positive_noncompact()) t.margin = std::min(t.margin, b->values.dot(lambda.torus));
  for (const Root* a : datum.positive_compact())
    t.compact_margin = std::min(t.compact_margin, a->values.dot(lambda.torus));
  t.inside = t.margin > tol::kChamberMargin && t.compact_margin >= -tol::kChamberMargin;
  return t;
}

ChamberConstants chamber_constants(const MatrixLieAlgebra& g, const ChamberWeight& lambda,
                                   const RootDatum& datum) {
  const ChamberTest test = in_holomorphic_chamber(lambda, datum);
  if (!test.inside) {
    std::ostringstream os;
    os << "weight is outside the holomorphic chamber (margin " << test.margin << ", compact margin "
       << test.compact_margin << ")";
    throw DomainError(os.str());
  }
  ChamberConstants c;
  c.m = test.margin;
  const Mat L = g.bracket_pairing(lambda.coadjoint());
  Eigen::JacobiSVD<Mat> svd(L);
  c.b = svd.singularValues()(0);
  return c;
}

StabilizerSplit stabilizer_algebra(const MatrixLieAlgebra& g, const ChamberWeight& lambda) {
  const int nk = g.dim_k();
  const Mat L = g.bracket_pairing(lambda.coadjoint());
  // Row X of L restricted to k is the functional lambda o ad(X) on k.
  Mat kernel, range;
  kernel_split(L.topLeftCorner(nk, nk), kernel, range);
  StabilizerSplit s;
  s.stabilizer = Mat::Zero(g.dim(), kernel.cols());
  s.stabilizer.topRows(nk) = kernel;
  s.complement = Mat::Zero(g.dim(), range.cols());
  s.complement.topRows(nk) = range;
  return s;
}

} // namespace hcorbit
