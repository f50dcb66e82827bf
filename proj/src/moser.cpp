#include "hcorbit/moser.hpp"

#include "hcorbit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace hcorbit {

Quadrature gauss_legendre(int n) {
  if (n < 1) throw DomainError("quadrature needs at least one node");
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // map [-1, 1] -> [0, 1]
    q.nodes[n - 1 - i] = 0.5 * (x + 1.0);
    q.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

// ---------------------------------------------------------------------------
// Families

HermitianFamily::HermitianFamily(const OrbitModel& model0) : FormFamily(model0) {
  if (model0.dim_base() != 0) throw DomainError("hermitian family lives on the lambda0 model");
}

Mat HermitianFamily::form(const PointFrame& f, double s, double t) const {
  return hermitian_fiber_matrix(f, t, s);
}

Mat HermitianFamily::rate(const PointFrame& f, double s, double t) const {
  return hermitian_fiber_rate(f, t, s);
}

Vec HermitianFamily::moment(const PointFrame& f, double t) const {
  const int nk = model().algebra().dim_k();
  return (f.spectrum().apply([t](double x) { return spectral::cosh_gap(x, t); }) * model().lambda0()).head(nk);
}

double HermitianFamily::properness_bound() const { return 1.0 / (2.0 * model().z0_norm()); }

ScalingFamily::ScalingFamily(const OrbitModel& model0, double delta) : FormFamily(model0), delta_(delta) {
  if (model0.dim_base() != 0) throw DomainError("scaling family lives on the lambda0 model");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
}

Mat ScalingFamily::form(const PointFrame& f, double s, double t) const {
  return (1.0 - t + t * delta_) * hermitian_fiber_matrix(f, 1.0, s);
}

Mat ScalingFamily::rate(const PointFrame& f, double s, double /*t*/) const {
  return (delta_ - 1.0) * hermitian_fiber_matrix(f, 1.0, s);
}

Vec ScalingFamily::moment(const PointFrame& f, double t) const {
  const int nk = model().algebra().dim_k();
  const Vec c = f.spectrum().apply([](double x) { return std::cosh(x); }) * model().lambda0();
  return (1.0 - t + t * delta_) * c.head(nk);
}

double ScalingFamily::properness_bound() const {
  return std::min(1.0, delta_) / (2.0 * model().z0_norm());
}

SegmentFamily::SegmentFamily(const OrbitModel& model, double delta) : FormFamily(model), delta_(delta) {
  const ChamberConstants c = chamber_constants(model.algebra(), model.weight(), model.datum());
  if (!(delta > c.b)) {
    std::ostringstream os;
    os << "segment needs delta > b_lambda (delta " << delta << ", b_lambda " << c.b << ")";
    throw DomainError(os.str());
  }
  // inf over t of m_{lambda_t}^2 / (2 |H_{lambda_t}|), lambda_t = t lambda + (1 - t) delta lambda0.
  const RootDatum& d = model.datum();
  bound_ = std::numeric_limits<double>::infinity();
  const int grid = 2000;
  for (int i = 0; i <= grid; ++i) {
    const double t = static_cast<double>(i) / grid;
    const Vec h = t * model.weight().torus + (1.0 - t) * delta * d.z0_torus;
    double m = std::numeric_limits<double>::infinity();
    for (const Root* b : d.positive_noncompact()) m = std::min(m, b->values.dot(h));
    bound_ = std::min(bound_, m * m / (2.0 * h.norm()));
  }
}

Mat SegmentFamily::form(const PointFrame& f, double s, double t) const {
  return segment_matrix(f, 1.0 - t, delta_, s);
}

Mat SegmentFamily::rate(const PointFrame& f, double s, double /*t*/) const {
  return pullback_kks_matrix(f, s) - delta_matrix(f, delta_, s);
}

Vec SegmentFamily::moment(const PointFrame& f, double t) const { return moment_segment(f, t, delta_); }

// ---------------------------------------------------------------------------
// Primitives

HomotopyPrimitive::HomotopyPrimitive(const FormFamily& family, int nodes)
    : family_(&family), quad_(gauss_legendre(nodes)) {}

Vec HomotopyPrimitive::evaluate(const OrbitPoint& x, double t) const {
  return evaluate(PointFrame(family_->model(), x), t);
}

Vec HomotopyPrimitive::evaluate(const PointFrame& f, double t) const {
  const OrbitModel& m = family_->model();
  const int a = m.dim_base();
  const int n = m.dim_tangent();
  Vec e = Vec::Zero(n);
  e.tail(m.dim_fiber()) = f.point().z;
  Vec mu = Vec::Zero(n);
  if (f.point().z.squaredNorm() == 0.0) return mu;
  for (size_t i = 0; i < quad_.nodes.size(); ++i) {
    const double s = quad_.nodes[i];
    Vec we = family_->rate(f, s, t).transpose() * e;
    we.tail(m.dim_fiber()) *= s;
    mu += quad_.weights[i] * we;
  }
  (void)a;
  return mu;
}

double HomotopyPrimitive::zero_section_residual(const std::vector<OrbitPoint>& points,
                                                const std::vector<double>& times) const {
  const OrbitModel& m = family_->model();
  const int a = m.dim_base();
  double r = 0.0;
  if (a == 0) return r;
  for (const OrbitPoint& p : points) {
    OrbitPoint z0{p.k, Vec::Zero(m.dim_fiber())};
    const PointFrame f(m, z0);
    for (double t : times) r = std::max(r, family_->rate(f, 1.0, t).topLeftCorner(a, a).cwiseAbs().maxCoeff());
  }
  return r;
}

void HomotopyPrimitive::validate(const std::vector<OrbitPoint>& points, const std::vector<double>& times,
                                 double tol) const {
  const double r = zero_section_residual(points, times);
  if (r > tol) {
    std::ostringstream os;
    os << "rate form does not vanish on the zero section (residual " << r << ")";
    throw DomainError(os.str());
  }
}

GaugeFixed::GaugeFixed(const OneFormFamily& mu, int nodes, double eps)
    : mu_(&mu), quad_(gauss_legendre(nodes)), eps_(eps) {}

double GaugeFixed::gauge_function(const OrbitPoint& x, double t) const {
  const OrbitModel& m = mu_->model();
  const int a = m.dim_base();
  double f = 0.0;
  for (size_t i = 0; i < quad_.nodes.size(); ++i) {
    const double s = quad_.nodes[i];
    const OrbitPoint y{x.k, s * x.z};
    const Vec mu = mu_->evaluate(y, t);
    f += quad_.weights[i] * mu.segment(a, m.dim_fiber()).dot(s * x.z);
  }
  return 2.0 * f;
}

Vec GaugeFixed::evaluate(const OrbitPoint& x, double t) const {
  const OrbitModel& m = mu_->model();
  const int n = m.dim_tangent();
  Vec df(n);
  for (int j = 0; j < n; ++j) {
    const Vec u = Vec::Unit(n, j);
    df(j) = (gauge_function(chart_point(m, x, u, eps_), t) - gauge_function(chart_point(m, x, u, -eps_), t)) /
            (2.0 * eps_);
  }
  return mu_->evaluate(x, t) - df;
}

// ---------------------------------------------------------------------------
// Field and flow

namespace {

Vec solve_field(const Mat& w, const Vec& mu) {
  Eigen::PartialPivLU<Mat> lu(w);
  const double rc = lu.rcond();
  if (!(rc > 1e-12)) {
    std::ostringstream os;
    os << "form is degenerate along the flow (rcond " << rc << ")";
    throw NumericalError(os.str());
  }
  return lu.solve(mu);
}

Vec field_at(const FormFamily& family, const OneFormFamily& mu, const OrbitPoint& x, double t) {
  const PointFrame f(family.model(), x);
  return solve_field(family.form(f, 1.0, t), mu.evaluate(f, t));
}

Vec dexpinv(const MatrixLieAlgebra& g, const Vec& theta, const Vec& x) {
  const Vec b = g.bracket(theta, x);
  return x - 0.5 * b + (1.0 / 12.0) * g.bracket(theta, b);
}

} // namespace

Vec moser_field(const FormFamily& family, const OneFormFamily& mu, const OrbitPoint& x, double t) {
  return field_at(family, mu, x, t);
}

FlowTrace integrate_flow(const FormFamily& family, const OneFormFamily& mu, const OrbitPoint& initial,
                         const FlowOptions& options) {
  if (options.steps < 1) throw DomainError("flow needs at least one step");
  const OrbitModel& m = family.model();
  const MatrixLieAlgebra& g = m.algebra();
  const int a = m.dim_base();
  const int np = m.dim_fiber();
  const Mat& C = m.complement();
  const double h = 1.0 / options.steps;
  const double ceiling = options.z_ceiling_factor * std::max(1.0, initial.z.norm());

  FlowTrace tr;
  tr.initial = initial;
  tr.steps = options.steps;
  CMat k = initial.k;
  Vec z = initial.z;
  if (options.keep_points) tr.points.push_back(initial);

  auto split = [&](const Vec& xi, Vec& xk, Vec& dz) {
    xk = C * xi.head(a);
    dz = xi.tail(np);
  };
  auto moved = [&](const Vec& theta) { return a > 0 ? CMat(k * exp_k(g, theta)) : k; };

  for (int n = 0; n < options.steps; ++n) {
    const double t = n * h;
    Vec x1, x2, x3, x4, a1, a2, a3, a4;
    split(field_at(family, mu, {k, z}, t), x1, a1);
    const Vec th1 = x1;
    Vec theta = 0.5 * h * th1;
    split(field_at(family, mu, {moved(theta), z + 0.5 * h * a1}, t + 0.5 * h), x2, a2);
    const Vec th2 = dexpinv(g, theta, x2);
    theta = 0.5 * h * th2;
    split(field_at(family, mu, {moved(theta), z + 0.5 * h * a2}, t + 0.5 * h), x3, a3);
    const Vec th3 = dexpinv(g, theta, x3);
    theta = h * th3;
    split(field_at(family, mu, {moved(theta), z + h * a3}, t + h), x4, a4);
    const Vec th4 = dexpinv(g, theta, x4);

    k = moved((h / 6.0) * (th1 + 2.0 * th2 + 2.0 * th3 + th4));
    z += (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);

    const double res = unitarity_residual(k);
    tr.max_unitarity_residual = std::max(tr.max_unitarity_residual, res);
    if (res > 1e-6) {
      std::ostringstream os;
      os << "K-factor drifted off K (residual " << res << ") at step " << n;
      throw NumericalError(os.str());
    }
    if (res > 1e-12) {
      k = polar_project(k);
      ++tr.reprojections;
    }
    if (!(z.norm() <= ceiling)) {
      std::ostringstream os;
      os << "fiber coordinate left the ceiling " << ceiling << " at step " << n;
      throw NumericalError(os.str());
    }
    if (options.keep_points) tr.points.push_back({k, z});
  }
  tr.final = {k, z};
  return tr;
}

PointMap flow_map(const FormFamily& family, const OneFormFamily& mu, FlowOptions options) {
  options.keep_points = false;
  return [&family, &mu, options](const OrbitPoint& x) { return integrate_flow(family, mu, x, options).final; };
}

// ---------------------------------------------------------------------------
// Certification

namespace {

struct Jacobian {
  OrbitPoint image;
  Mat d;
};

Jacobian jacobian_at(const OrbitModel& model, const PointMap& rho, const OrbitPoint& x, const PullbackOptions& opt) {
  if (opt.stencil != 2 && opt.stencil != 4) throw DomainError("stencil must be 2 or 4");
  const int n = model.dim_tangent();
  Jacobian J;
  J.image = rho(x);
  J.d.resize(n, n);
  const double e = opt.eps;
  for (int j = 0; j < n; ++j) {
    const Vec u = Vec::Unit(n, j);
    auto c = [&](double h) { return chart_coords(model, J.image, rho(chart_point(model, x, u, h))); };
    if (opt.stencil == 2)
      J.d.col(j) = (c(e) - c(-e)) / (2.0 * e);
    else
      J.d.col(j) = (-c(2 * e) + 8.0 * c(e) - 8.0 * c(-e) + c(-2 * e)) / (12.0 * e);
  }
  return J;
}

} // namespace

Mat map_jacobian(const OrbitModel& model, const PointMap& rho, const OrbitPoint& x, const PullbackOptions& opt) {
  return jacobian_at(model, rho, x, opt).d;
}

PullbackReport verify_pullback(const OrbitModel& model, const PointMap& rho, const FormAt& source,
                               const FormAt& target, const std::vector<OrbitPoint>& samples,
                               const PullbackOptions& opt) {
  PullbackReport rep;
  rep.residuals.assign(samples.size(), 0.0);
  parallel_for(static_cast<int>(samples.size()), [&](int i) {
    const Jacobian J = jacobian_at(model, rho, samples[i], opt);
    const Mat pulled = J.d.transpose() * target(J.image) * J.d;
    rep.residuals[i] = (pulled - source(samples[i])).cwiseAbs().maxCoeff();
  });
  for (double r : rep.residuals) rep.max_residual = std::max(rep.max_residual, r);
  return rep;
}

double moment_shift_spread(const PointMap& rho, const MomentAt& source, const MomentAt& target,
                           const std::vector<OrbitPoint>& samples) {
  if (samples.empty()) return 0.0;
  std::vector<Vec> c(samples.size());
  parallel_for(static_cast<int>(samples.size()),
               [&](int i) { c[i] = target(rho(samples[i])) - source(samples[i]); });
  Vec mean = Vec::Zero(c[0].size());
  for (const Vec& v : c) mean += v / static_cast<double>(c.size());
  double spread = 0.0;
  for (const Vec& v : c) spread = std::max(spread, (v - mean).norm());
  return spread;
}

namespace {

// Tangent coordinates of the chart vector v at chart position u around x.
Vec chart_tangent(const OrbitModel& model, const Vec& u, const Vec& v) {
  const int a = model.dim_base();
  Vec w = v;
  if (a == 0) return w;
  const MatrixLieAlgebra& g = model.algebra();
  const Mat& C = model.complement();
  const Mat ad = g.adjoint_matrix(C * u.head(a));
  // Psi_Theta(V) = sum (-ad Theta)^n / (n+1)! V
  Vec term = C * v.head(a);
  Vec acc = term;
  for (int n = 1; n < 16; ++n) {
    term = -(ad * term) / (n + 1.0);
    acc += term;
  }
  w.head(a) = C.transpose() * acc;
  return w;
}

} // namespace

double stokes_defect(const FormFamily& family, const OneFormFamily& mu, const OrbitPoint& x,
                     const Vec& d1, const Vec& d2, double h, double t) {
  const OrbitModel& m = family.model();
  const Quadrature q = gauss_legendre(16);
  const Vec p1 = h * d1, p2 = h * d2;
  const Vec p0 = Vec::Zero(m.dim_tangent());

  auto edge = [&](const Vec& a, const Vec& b) {
    double sum = 0.0;
    for (size_t i = 0; i < q.nodes.size(); ++i) {
      const Vec u = a + q.nodes[i] * (b - a);
      const Vec w = mu.evaluate(chart_point(m, x, u), t);
      sum += q.weights[i] * w.dot(chart_tangent(m, u, b - a));
    }
    return sum;
  };
  const double line = edge(p0, p1) + edge(p1, p2) + edge(p2, p0);

  const Quadrature q8 = gauss_legendre(8);
  double area = 0.0;
  for (size_t i = 0; i < q8.nodes.size(); ++i)
    for (size_t j = 0; j < q8.nodes.size(); ++j) {
      const double al = q8.nodes[i];
      const double be = q8.nodes[j] * (1.0 - al);
      const double jac = 1.0 - al;
      const Vec u = al * p1 + be * p2;
      const PointFrame f(m, chart_point(m, x, u));
      const Mat w = family.rate(f, 1.0, t);
      area += q8.weights[i] * q8.weights[j] * jac * chart_tangent(m, u, p1).dot(w * chart_tangent(m, u, p2));
    }
  return std::abs(line - area) / std::max(std::abs(area), std::numeric_limits<double>::min());
}

HypothesisReport check_hypotheses(const FormFamily& family, const HomotopyPrimitive& mu,
                                  const std::vector<OrbitPoint>& zero_section, const HypothesisOptions& o) {
  const OrbitModel& m = family.model();
  const MatrixLieAlgebra& g = m.algebra();
  const int a = m.dim_base();
  const int np = m.dim_fiber();
  const int n = m.dim_tangent();
  HypothesisReport r;
  r.bound_d = family.properness_bound();
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const std::vector<double> times{0.0, 0.25, 0.5, 0.75, 1.0};

  // (1) d mu_t = d/dt Omega_t on small triangles.
  std::vector<OrbitPoint> bases;
  std::vector<Vec> dirs1, dirs2;
  std::vector<double> ts;
  for (int i = 0; i < o.stokes_simplices; ++i) {
    OrbitPoint x = zero_section.empty() ? OrbitPoint{CMat::Identity(g.matrix_size(), g.matrix_size()), Vec()}
                                        : zero_section[i % zero_section.size()];
    x.z = random_p(g, rng, 1.0);
    Vec d1(n), d2(n);
    for (int j = 0; j < n; ++j) d1(j) = n01(rng);
    for (int j = 0; j < n; ++j) d2(j) = n01(rng);
    bases.push_back(x);
    dirs1.push_back(d1.normalized());
    dirs2.push_back(d2.normalized());
    ts.push_back(u01(rng));
  }
  std::vector<double> defects(bases.size());
  parallel_for(static_cast<int>(bases.size()), [&](int i) {
    defects[i] = stokes_defect(family, mu, bases[i], dirs1[i], dirs2[i], o.stokes_diameter, ts[i]);
  });
  for (double d : defects) r.stokes_max_rel_error = std::max(r.stokes_max_rel_error, d);
  r.stokes_ok = r.stokes_max_rel_error < o.stokes_tol;

  // (2), (3) and the kernel condition at zero-section points.
  for (const OrbitPoint& p : zero_section) {
    const OrbitPoint x0{p.k, Vec::Zero(np)};
    const PointFrame f(m, x0);
    for (double t : times) {
      r.zero_section_moment_sup = std::max(r.zero_section_moment_sup, family.moment(f, t).norm());
      const Mat w = family.form(f, 1.0, t);
      Eigen::JacobiSVD<Mat> svd(w.bottomRows(np), Eigen::ComputeFullV);
      const Vec& sv = svd.singularValues();
      int rank = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol::kRankRelative * sv(0)) ++rank;
      const Mat null = svd.matrixV().rightCols(n - rank);
      double res = (null.cols() == a) ? 0.0 : 1.0;
      if (null.cols() > 0) res = std::max(res, null.bottomRows(np).colwise().norm().maxCoeff());
      r.orthogonality_residual = std::max(r.orthogonality_residual, res);
      const Vec xi = solve_field(w, mu.evaluate(f, t));
      r.zero_section_field = std::max(r.zero_section_field, xi.tail(np).norm());
      if (a > 0)
        r.kernel_residual =
            std::max(r.kernel_residual, family.rate(f, 1.0, t).topLeftCorner(a, a).cwiseAbs().maxCoeff());
    }
  }
  r.bounded_ok = std::isfinite(r.zero_section_moment_sup);
  r.orthogonality_ok = r.orthogonality_residual < o.orthogonality_tol && r.zero_section_field < o.orthogonality_tol;
  r.kernel_ok = r.kernel_residual < tol::kIdentity;

  // (4) properness with gamma = 2, plus the gauge function of the primitive.
  const GaugeFixed gauge(mu);
  std::vector<OrbitPoint> pts(o.properness_samples);
  std::vector<double> pt(o.properness_samples);
  for (int i = 0; i < o.properness_samples; ++i) {
    pts[i].k = random_k(g, rng);
    pts[i].z = random_p(g, rng, o.fiber_radius);
    pt[i] = u01(rng);
  }
  std::vector<double> ratio(pts.size()), lphi(pts.size()), lz(pts.size());
  parallel_for(static_cast<int>(pts.size()), [&](int i) {
    const double zn = pts[i].z.norm();
    const double phi = family.moment(pts[i], pt[i]).norm();
    ratio[i] = phi / (zn * zn);
    lphi[i] = std::log(phi);
    lz[i] = std::log(zn);
  });
  r.fitted_d = *std::min_element(ratio.begin(), ratio.end());
  {
    double mx = 0, my = 0;
    for (size_t i = 0; i < lz.size(); ++i) {
      mx += lz[i] / lz.size();
      my += lphi[i] / lz.size();
    }
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < lz.size(); ++i) {
      sxy += (lz[i] - mx) * (lphi[i] - my);
      sxx += (lz[i] - mx) * (lz[i] - mx);
    }
    r.fitted_gamma = sxx > 0 ? sxy / sxx : 0.0;
  }
  r.properness_ok = r.fitted_d >= (1.0 - o.properness_slack) * r.bound_d;

  const int gauge_points = std::min<int>(8, static_cast<int>(pts.size()));
  for (int i = 0; i < gauge_points; ++i)
    r.gauge_max = std::max(r.gauge_max, std::abs(gauge.gauge_function(pts[i], pt[i])));
  r.gauge_ok = r.gauge_max < o.gauge_tol;
  return r;
}

} // namespace hcorbit
