#include "hcorbit/orbit_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hcorbit {

OrbitModel::OrbitModel(const MatrixLieAlgebra& g, const RootDatum& datum, const ChamberWeight& lambda)
    : g_(&g), datum_(&datum), weight_(lambda) {
  const ChamberTest test = in_holomorphic_chamber(lambda, datum);
  if (!test.inside) {
    std::ostringstream os;
    os << "weight is outside the holomorphic chamber (margin " << test.margin << ")";
    throw DomainError(os.str());
  }
  pairing_ = g.bracket_pairing(lambda.h);
  pairing0_ = g.bracket_pairing(datum.lambda0);
  const StabilizerSplit split = stabilizer_algebra(g, lambda);
  complement_ = split.complement;
  stabilizer_ = split.stabilizer;
  base_block_ = complement_.transpose() * pairing_ * complement_;
  const int np = g.dim_p();
  omega_p_ = g.adjoint_matrix(datum.z0).bottomRightCorner(np, np);
}

Vec OrbitTangent::stacked() const {
  Vec u(x.size() + a.size());
  u << x, a;
  return u;
}

OrbitTangent OrbitTangent::split(const Vec& u, int dim_base) {
  return {u.head(dim_base), u.tail(u.size() - dim_base)};
}

const char* to_string(FormLabel label) {
  switch (label) {
  case FormLabel::PullbackKKS: return "pullback_kks";
  case FormLabel::Product: return "product";
  case FormLabel::Delta: return "delta";
  case FormLabel::Segment: return "segment";
  case FormLabel::ScaledHermitian: return "scaled_hermitian";
  case FormLabel::Flat: return "flat";
  case FormLabel::Rate: return "rate";
  }
  return "unknown";
}

PointFrame::PointFrame(const OrbitModel& model, const OrbitPoint& point)
    : model_(&model), point_(point) {
  const MatrixLieAlgebra& g = model.algebra();
  ad_k_ = g.adjoint_group(point.k);
  k_lambda_ = ad_k_ * model.lambda();
  k_pairing_ = ad_k_ * model.pairing() * ad_k_.transpose();
  spectrum_ = AdSpectrum(g, g.embed_p(point.z));
  vt_p_ = spectrum_.vectors().bottomRows(g.dim_p()).transpose();
}

namespace {

Mat block_diag(const Mat& a, const Mat& b) {
  Mat m = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

Mat hstack(const Mat& a, const Mat& b) {
  Mat m(a.rows(), a.cols() + b.cols());
  m << a, b;
  return m;
}

Mat congruence(const Mat& T, const Mat& L) { return T.transpose() * L * T; }

CMat identity_group(const MatrixLieAlgebra& g) {
  return CMat::Identity(g.matrix_size(), g.matrix_size());
}

} // namespace

Mat pullback_kks_matrix(const PointFrame& f, double s) {
  const OrbitModel& m = f.model();
  const Mat qm = f.ad_k().transpose() * f.fiber_columns(spectral::psi_minus, s);
  const Mat qp = f.fiber_columns(spectral::psi_plus, s);
  Mat w = congruence(hstack(m.complement(), qm), m.pairing());
  w.bottomRightCorner(m.dim_fiber(), m.dim_fiber()) += congruence(qp, f.k_pairing());
  return w;
}

Mat pullback_kks_unsplit_matrix(const PointFrame& f, double s) {
  const OrbitModel& m = f.model();
  const Mat q = f.ad_k().transpose() * f.fiber_columns(spectral::psi, s);
  return congruence(hstack(m.complement(), q), m.pairing());
}

Mat product_matrix(const OrbitModel& model) { return block_diag(model.base_block(), model.omega_p()); }

Mat delta_matrix(const PointFrame& f, double delta, double s) {
  const OrbitModel& m = f.model();
  const Mat qp = f.fiber_columns(spectral::psi_plus, s);
  return block_diag(m.base_block(), delta * congruence(qp, m.pairing0()));
}

Mat segment_matrix(const PointFrame& f, double t, double delta, double s) {
  return t * delta_matrix(f, delta, s) + (1.0 - t) * pullback_kks_matrix(f, s);
}

Mat hermitian_fiber_matrix(const PointFrame& f, double t, double s) {
  const Mat q = f.fiber_columns(spectral::psi_plus, t * s);
  return congruence(q, f.model().pairing0());
}

Mat hermitian_fiber_rate(const PointFrame& f, double t, double s) {
  const Mat q = f.fiber_columns(spectral::psi_plus, t * s);
  // d/dt sinh(t y)/(t y) = y psi_plus'(t y) with y = s nu.
  const Mat dq = f.fiber_columns([t](double y) { return y * spectral::psi_plus_slope(t * y); }, s);
  const Mat cross = dq.transpose() * f.model().pairing0() * q;
  return cross - cross.transpose();
}

SkewForm form_pullback_kks(const OrbitModel& model, const OrbitPoint& point) {
  const PointFrame f(model, point);
  return {FormLabel::PullbackKKS, 0.0, 0.0, pullback_kks_matrix(f)};
}

SkewForm form_product(const OrbitModel& model, const OrbitPoint& /*point*/) {
  return {FormLabel::Product, 0.0, 0.0, product_matrix(model)};
}

double form_p(const OrbitModel& model, const Vec& a, const Vec& b) {
  return a.dot(model.omega_p() * b);
}

SkewForm form_delta(const OrbitModel& model, const OrbitPoint& point, double delta) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  const PointFrame f(model, point);
  return {FormLabel::Delta, 1.0, delta, delta_matrix(f, delta)};
}

SkewForm form_segment(const OrbitModel& model, const OrbitPoint& point, double t, double delta) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  if (t < 0.0 || t > 1.0) throw DomainError("segment parameter must lie in [0, 1]");
  const PointFrame f(model, point);
  return {FormLabel::Segment, t, delta, segment_matrix(f, t, delta)};
}

SkewForm hermitian_family(const OrbitModel& model, const Vec& z, double t) {
  const PointFrame f(model, {identity_group(model.algebra()), z});
  return {FormLabel::ScaledHermitian, t, 0.0, hermitian_fiber_matrix(f, t)};
}

double nondegeneracy_margin(const Mat& form) {
  if (form.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(form);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double nondegeneracy_margin(const SkewForm& form) { return nondegeneracy_margin(form.matrix); }

Vec moment_pullback(const OrbitModel& model, const OrbitPoint& point) {
  const MatrixLieAlgebra& g = model.algebra();
  return gamma_map(g, point.k, model.lambda(), g.embed_p(point.z)).head(g.dim_k());
}

Vec moment_pullback(const PointFrame& f) {
  const int nk = f.model().algebra().dim_k();
  return (f.spectrum().apply([](double x) { return std::cosh(x); }) * f.k_lambda()).head(nk);
}

Vec moment_delta(const PointFrame& f, double delta) {
  const int nk = f.model().algebra().dim_k();
  const Vec c0 = f.spectrum().apply([](double x) { return std::cosh(x); }) * f.model().lambda0();
  return f.k_lambda().head(nk) + delta * c0.head(nk);
}

Vec moment_delta(const OrbitModel& model, const OrbitPoint& point, double delta) {
  return moment_delta(PointFrame(model, point), delta);
}

Vec moment_segment(const PointFrame& f, double t, double delta) {
  return t * moment_pullback(f) + (1.0 - t) * moment_delta(f, delta);
}

Vec moment_segment(const OrbitModel& model, const OrbitPoint& point, double t, double delta) {
  return moment_segment(PointFrame(model, point), t, delta);
}

Vec moment_flat(const OrbitModel& model, const Vec& z) {
  const MatrixLieAlgebra& g = model.algebra();
  const Mat ad = g.adjoint_matrix(g.embed_p(z));
  return ((ad * ad).transpose() * model.lambda0()).head(g.dim_k());
}

Vec moment_product(const OrbitModel& model, const OrbitPoint& point) {
  const MatrixLieAlgebra& g = model.algebra();
  const int nk = g.dim_k();
  const int np = g.dim_p();
  const Vec xi = g.adjoint_group(point.k) * model.lambda();
  const Vec v = g.embed_p(point.z);
  Vec phi = xi.head(nk);
  for (int i = 0; i < nk; ++i) {
    const Vec xv = (g.ad_basis()[i] * v).tail(np);
    phi(i) += 0.5 * form_p(model, point.z, xv);
  }
  return phi;
}

Vec moment_flat_normalized(const OrbitModel& model, const Vec& z) {
  return kMomentConventions.flat_scale * moment_flat(model, z);
}

Vec moment_product_normalized(const OrbitModel& model, const OrbitPoint& point) {
  const Vec raw = moment_product(model, point);
  const MatrixLieAlgebra& g = model.algebra();
  const Vec base = (g.adjoint_group(point.k) * model.lambda()).head(g.dim_k());
  return base + kMomentConventions.product_fiber_scale * (raw - base);
}

Vec hermitian_moment(const OrbitModel& model, const Vec& z, double t) {
  const MatrixLieAlgebra& g = model.algebra();
  const AdSpectrum sp(g, g.embed_p(z));
  return (sp.apply([t](double x) { return spectral::cosh_gap(x, t); }) * model.lambda0()).head(g.dim_k());
}

BracketInequalityResult bracket_inequality_check(const MatrixLieAlgebra& g, const RootDatum& datum,
                            const ChamberWeight& lambda, const ChamberWeight& lambda_prime,
                            const Vec& z) {
  if (!in_holomorphic_chamber(lambda, datum).inside || !in_holomorphic_chamber(lambda_prime, datum).inside)
    throw DomainError("lemma check needs both weights inside the holomorphic chamber");
  const Mat ad = g.adjoint_matrix(g.embed_p(z));
  BracketInequalityResult r;
  r.lhs = g.b_theta(lambda.h, ad * (ad * lambda_prime.h));
  double mn = std::numeric_limits<double>::infinity();
  for (const Root* b : datum.positive_noncompact())
    mn = std::min(mn, b->values.dot(lambda.torus) * b->values.dot(lambda_prime.torus));
  r.rhs = mn * z.squaredNorm();
  r.pass = r.lhs >= r.rhs - 1e-10;
  return r;
}

OrbitPoint chart_point(const OrbitModel& model, const OrbitPoint& base, const Vec& u, double eps) {
  const int a = model.dim_base();
  OrbitPoint p = base;
  if (a > 0) p.k = base.k * exp_k(model.algebra(), eps * (model.complement() * u.head(a)));
  p.z = base.z + eps * u.tail(model.dim_fiber());
  return p;
}

Vec chart_coords(const OrbitModel& model, const OrbitPoint& base, const OrbitPoint& point) {
  const int a = model.dim_base();
  Vec u(model.dim_tangent());
  if (a > 0) {
    const Vec y = model.algebra().coords_unchecked(log_near_identity(base.k.adjoint() * point.k));
    u.head(a) = model.complement().transpose() * y;
  }
  u.tail(model.dim_fiber()) = point.z - base.z;
  return u;
}

OrbitPoint act(const OrbitModel& model, const CMat& kprime, const OrbitPoint& point) {
  const MatrixLieAlgebra& g = model.algebra();
  const Mat ad = g.adjoint_group(kprime);
  return {kprime * point.k, (ad * g.embed_p(point.z)).tail(g.dim_p())};
}

double point_distance(const OrbitModel& model, const OrbitPoint& a, const OrbitPoint& b) {
  const MatrixLieAlgebra& g = model.algebra();
  const Vec la = g.adjoint_group(a.k) * model.lambda();
  const Vec lb = g.adjoint_group(b.k) * model.lambda();
  return (la - lb).norm() + (a.z - b.z).norm();
}

Vec generator(const OrbitModel& model, const OrbitPoint& point, const Vec& xk) {
  const MatrixLieAlgebra& g = model.algebra();
  const Vec x = g.embed_k(xk);
  Vec u(model.dim_tangent());
  u.head(model.dim_base()) = model.complement().transpose() * (g.adjoint_group(point.k).transpose() * x);
  u.tail(model.dim_fiber()) = (g.adjoint_matrix(x) * g.embed_p(point.z)).tail(g.dim_p());
  return u;
}

Vec transport(const OrbitModel& model, const CMat& kprime, const Vec& u) {
  const MatrixLieAlgebra& g = model.algebra();
  Vec v = u;
  v.tail(model.dim_fiber()) = (g.adjoint_group(kprime) * g.embed_p(u.tail(model.dim_fiber()))).tail(g.dim_p());
  return v;
}

CMat random_k(const MatrixLieAlgebra& g, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Vec x(g.dim_k());
  for (int i = 0; i < x.size(); ++i) x(i) = scale * n01(rng);
  return exp_k(g, g.embed_k(x));
}

Vec random_p(const MatrixLieAlgebra& g, std::mt19937_64& rng, double radius) {
  std::normal_distribution<double> n01(0.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Vec z(g.dim_p());
  for (int i = 0; i < z.size(); ++i) z(i) = n01(rng);
  const double r = radius * u01(rng);
  return r * z / z.norm();
}

OrbitPoint random_point(const OrbitModel& model, std::mt19937_64& rng, double radius) {
  OrbitPoint p;
  p.k = random_k(model.algebra(), rng);
  p.z = random_p(model.algebra(), rng, radius);
  return p;
}

ChamberWeight random_chamber_weight(const MatrixLieAlgebra& g, const RootDatum& datum,
                                    std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.2, 3.0);
  const double nz = datum.z0_torus.norm();
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Vec c = scale(rng) * datum.z0_torus;
    for (int j = 0; j < c.size(); ++j) c(j) += 0.5 * nz * n01(rng);
    ChamberWeight w = make_weight(g, c);
    const ChamberTest t = in_holomorphic_chamber(w, datum);
    if (t.inside && t.margin > 1e-3) return w;
  }
  throw NumericalError("chamber rejection sampling failed");
}

MomentIdentity moment_identity(const OrbitModel& model, const FormAt& form, const MomentAt& moment,
                               const OrbitPoint& point, double eps) {
  const MatrixLieAlgebra& g = model.algebra();
  const int m = model.dim_tangent();
  const int nk = g.dim_k();
  const Mat w = form(point);
  Mat fd(nk, m), iota(nk, m);
  for (int j = 0; j < m; ++j) {
    const Vec u = Vec::Unit(m, j);
    const Vec plus = moment(chart_point(model, point, u, eps));
    const Vec minus = moment(chart_point(model, point, u, -eps));
    fd.col(j) = (plus - minus) / (2.0 * eps);
  }
  for (int i = 0; i < nk; ++i) iota.row(i) = generator(model, point, Vec::Unit(nk, i)).transpose() * w;
  MomentIdentity r;
  r.residual = (fd - iota).cwiseAbs().maxCoeff();
  const double dd = fd.squaredNorm();
  r.fitted_scale = dd > 0.0 ? (fd.cwiseProduct(iota)).sum() / dd : 0.0;
  return r;
}

MomentCalibration calibrate_moment_conventions(const OrbitModel& model0, std::uint64_t seed, int points) {
  std::mt19937_64 rng(seed);
  MomentCalibration c;
  const FormAt flat_form = [&](const OrbitPoint&) { return product_matrix(model0); };
  const MomentAt flat = [&](const OrbitPoint& x) { return moment_flat(model0, x.z); };
  const MomentAt prod = [&](const OrbitPoint& x) { return moment_product(model0, x); };
  for (int i = 0; i < points; ++i) {
    const OrbitPoint x = random_point(model0, rng, 1.0);
    c.flat_scale += moment_identity(model0, flat_form, flat, x).fitted_scale / points;
    c.product_fiber_scale += moment_identity(model0, flat_form, prod, x).fitted_scale / points;
  }
  return c;
}

} // namespace hcorbit
