#pragma once

#include "hcorbit/orbit_forms.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace hcorbit {

/// Gauss-Legendre nodes and weights on [0, 1].
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Quadrature gauss_legendre(int n);

/// A smooth family t -> Omega_t of K-invariant forms on an orbit model, with
/// its time derivative and moment maps. Evaluations take a frame and a ray
/// scale s so that the homotopy operator can walk the fiber ray (k, sZ).
class FormFamily {
public:
  explicit FormFamily(const OrbitModel& model) : model_(&model) {}
  virtual ~FormFamily() = default;

  const OrbitModel& model() const { return *model_; }

  virtual std::string name() const = 0;
  virtual Mat form(const PointFrame& f, double s, double t) const = 0;
  virtual Mat rate(const PointFrame& f, double s, double t) const = 0;
  virtual Vec moment(const PointFrame& f, double t) const = 0;
  /// Analytic lower bound d in |phi_t| >= d |Z|^2.
  virtual double properness_bound() const = 0;
  virtual bool is_segment() const { return false; }

  Mat form(const OrbitPoint& x, double t) const { return form(PointFrame(*model_, x), 1.0, t); }
  Vec moment(const OrbitPoint& x, double t) const { return moment(PointFrame(*model_, x), t); }

private:
  const OrbitModel* model_;
};

/// Omega_t|_Z = Gamma_0^* Omega_{G.lambda0} at tZ, on the lambda0 model.
/// Omega_0 = Omega_p, Omega_1 = Gamma_0^* Omega_{G.lambda0}.
class HermitianFamily : public FormFamily {
public:
  explicit HermitianFamily(const OrbitModel& model0);
  using FormFamily::form;
  using FormFamily::moment;
  std::string name() const override { return "hermitian"; }
  Mat form(const PointFrame& f, double s, double t) const override;
  Mat rate(const PointFrame& f, double s, double t) const override;
  Vec moment(const PointFrame& f, double t) const override;
  double properness_bound() const override;
};

/// (1 - t + t delta) Gamma_0^* Omega_{G.lambda0} on the lambda0 model.
class ScalingFamily : public FormFamily {
public:
  ScalingFamily(const OrbitModel& model0, double delta);
  using FormFamily::form;
  using FormFamily::moment;
  std::string name() const override { return "scaling"; }
  Mat form(const PointFrame& f, double s, double t) const override;
  Mat rate(const PointFrame& f, double s, double t) const override;
  Vec moment(const PointFrame& f, double t) const override;
  double properness_bound() const override;
  bool is_segment() const override { return true; }
  double delta() const { return delta_; }

private:
  double delta_;
};

/// Omega_t = (1 - t) Omega^delta + t Gamma^* Omega_{G.lambda}, i.e.
/// form_segment at 1 - t, with moment moment_segment at t.
class SegmentFamily : public FormFamily {
public:
  /// Throws DomainError unless delta > b_lambda.
  SegmentFamily(const OrbitModel& model, double delta);
  using FormFamily::form;
  using FormFamily::moment;
  std::string name() const override { return "segment"; }
  Mat form(const PointFrame& f, double s, double t) const override;
  Mat rate(const PointFrame& f, double s, double t) const override;
  Vec moment(const PointFrame& f, double t) const override;
  double properness_bound() const override { return bound_; }
  bool is_segment() const override { return true; }
  double delta() const { return delta_; }

private:
  double delta_;
  double bound_;
};

/// Family of 1-forms, evaluated as covectors in tangent coordinates.
class OneFormFamily {
public:
  virtual ~OneFormFamily() = default;
  virtual const OrbitModel& model() const = 0;
  virtual Vec evaluate(const OrbitPoint& x, double t) const = 0;
  virtual Vec evaluate(const PointFrame& f, double t) const { return evaluate(f.point(), t); }
};

/// mu_t = h_F(d/dt Omega_t) with F(m, v, s) = (m, s v):
/// mu|_(m,v)(u) = int_0^1 omega|_(m,sv)((0, v), (u_M, s u_V)) ds.
class HomotopyPrimitive : public OneFormFamily {
public:
  explicit HomotopyPrimitive(const FormFamily& family, int nodes = 16);
  const OrbitModel& model() const override { return family_->model(); }
  const FormFamily& family() const { return *family_; }
  Vec evaluate(const OrbitPoint& x, double t) const override;
  Vec evaluate(const PointFrame& f, double t) const override;

  /// Max |i^* d/dt Omega_t| over zero-section points and times.
  double zero_section_residual(const std::vector<OrbitPoint>& points, const std::vector<double>& times) const;
  /// Throws DomainError when zero_section_residual exceeds tol.
  void validate(const std::vector<OrbitPoint>& points, const std::vector<double>& times, double tol = 1e-10) const;

private:
  const FormFamily* family_;
  Quadrature quad_;
};

/// mu_t - df_t with f_t(m, v) = 2 int_0^1 mu_t|_(m,sv)(0, sv) ds.
class GaugeFixed : public OneFormFamily {
public:
  explicit GaugeFixed(const OneFormFamily& mu, int nodes = 16, double eps = 1e-5);
  const OrbitModel& model() const override { return mu_->model(); }
  double gauge_function(const OrbitPoint& x, double t) const;
  Vec evaluate(const OrbitPoint& x, double t) const override;

private:
  const OneFormFamily* mu_;
  Quadrature quad_;
  double eps_;
};

/// Solves i(xi) Omega_t = -mu_t. Throws NumericalError when Omega_t is degenerate.
Vec moser_field(const FormFamily& family, const OneFormFamily& mu, const OrbitPoint& x, double t);

struct FlowOptions {
  int steps = 200;
  bool keep_points = false;
  double z_ceiling_factor = 10.0;
};

struct FlowTrace {
  OrbitPoint initial;
  OrbitPoint final;
  int steps = 0;
  std::vector<OrbitPoint> points;
  double max_unitarity_residual = 0.0;
  int reprojections = 0;
  int rejected_steps = 0;
};

/// Runge-Kutta-Munthe-Kaas 4 on t in [0, 1]: the K-factor moves by
/// k <- k exp(Theta), the fiber additively. Throws NumericalError on form
/// degeneracy, K drift beyond repair or |Z| above the ceiling.
FlowTrace integrate_flow(const FormFamily& family, const OneFormFamily& mu, const OrbitPoint& initial,
                         const FlowOptions& options = {});

using PointMap = std::function<OrbitPoint(const OrbitPoint&)>;

/// Time-1 map of the Moser flow.
PointMap flow_map(const FormFamily& family, const OneFormFamily& mu, FlowOptions options);

struct PullbackOptions {
  double eps = 1e-4;
  int stencil = 2; // 2 or 4 point central differences
};

/// d(rho) at x in tangent coordinates, by central differences of the map
/// applied to chart-perturbed points.
Mat map_jacobian(const OrbitModel& model, const PointMap& rho, const OrbitPoint& x, const PullbackOptions& opt);

struct PullbackReport {
  double max_residual = 0.0;
  std::vector<double> residuals;
};

/// max_ij |(D^T W_target(rho x) D - W_source(x))_ij| over samples.
PullbackReport verify_pullback(const OrbitModel& model, const PointMap& rho, const FormAt& source,
                               const FormAt& target, const std::vector<OrbitPoint>& samples,
                               const PullbackOptions& opt = {});

/// max_i |c_i - mean c| with c_i = phi_target(rho x_i) - phi_source(x_i).
double moment_shift_spread(const PointMap& rho, const MomentAt& source, const MomentAt& target,
                           const std::vector<OrbitPoint>& samples);

struct HypothesisOptions {
  int stokes_simplices = 8;
  double stokes_diameter = 1e-2;
  double stokes_tol = 1e-4;
  double orthogonality_tol = 1e-9;
  double gauge_tol = 1e-10;
  double properness_slack = 0.05;
  double fiber_radius = 2.0;
  int properness_samples = 200;
  std::uint64_t seed = 1;
};

struct HypothesisReport {
  double stokes_max_rel_error = 0.0;
  double zero_section_moment_sup = 0.0;
  double orthogonality_residual = 0.0;
  double zero_section_field = 0.0;
  double fitted_d = 0.0;
  double fitted_gamma = 0.0; // free log-log slope, for reference
  double bound_d = 0.0;
  double gauge_max = 0.0;
  double kernel_residual = 0.0; // i^*(Omega_1 - Omega_0) at the zero section
  bool stokes_ok = false;
  bool bounded_ok = false;
  bool orthogonality_ok = false;
  bool properness_ok = false;
  bool gauge_ok = false;
  bool kernel_ok = false;
  bool pass() const {
    return stokes_ok && bounded_ok && orthogonality_ok && properness_ok && gauge_ok && kernel_ok;
  }
};

/// Numerical certificates of the flow theorem's hypotheses at sampled points.
HypothesisReport check_hypotheses(const FormFamily& family, const HomotopyPrimitive& mu,
                                  const std::vector<OrbitPoint>& zero_section,
                                  const HypothesisOptions& options = {});

/// Stokes defect |oint_dD mu - int_D omega| / |int_D omega| on one small
/// triangle with vertices x, chart(x, h d1), chart(x, h d2).
double stokes_defect(const FormFamily& family, const OneFormFamily& mu, const OrbitPoint& x,
                     const Vec& d1, const Vec& d2, double h, double t);

} // namespace hcorbit
