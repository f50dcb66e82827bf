#include "hcorbit/pipeline.hpp"

#include "hcorbit/parallel.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace hcorbit {

namespace {

constexpr double kSampleRadius = 1.0;
constexpr double kLemmaRadius = 4.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<OrbitPoint> zero_section_points(const OrbitModel& model, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<OrbitPoint> pts;
  for (int i = 0; i < count; ++i) pts.push_back({random_k(model.algebra(), rng), Vec::Zero(model.dim_fiber())});
  return pts;
}

std::vector<OrbitPoint> sample_points(const OrbitModel& model, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<OrbitPoint> pts;
  for (int i = 0; i < count; ++i) pts.push_back(random_point(model, rng, kSampleRadius));
  return pts;
}

double scenario_delta(const Scenario& s, double b) { return s.delta ? *s.delta : s.delta_mult * b; }

} // namespace

std::unique_ptr<ScenarioContext> ScenarioContext::build(const Scenario& s) {
  auto ctx = std::unique_ptr<ScenarioContext>(
      new ScenarioContext{build_algebra(s.algebra()), RootDatum{}, ChamberWeight{}});
  ctx->datum = compute_root_datum(ctx->g);
  ctx->weight = s.weight(ctx->g, ctx->datum);
  const ChamberTest t = in_holomorphic_chamber(ctx->weight, ctx->datum);
  if (!t.inside) {
    std::ostringstream os;
    os << "lambda is outside the holomorphic chamber (noncompact margin " << t.margin << ", compact margin "
       << t.compact_margin << ")";
    throw DomainError(os.str());
  }
  return ctx;
}

std::uint64_t derive_seed(std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

LemmaResult check_structure(const MatrixLieAlgebra& g, double tol) {
  LemmaResult r;
  r.name = "structure";
  r.tolerance = tol;
  r.samples = g.dim();
  const double min_eig = Eigen::SelfAdjointEigenSolver<Mat>(g.b_theta_gram()).eigenvalues().minCoeff();
  r.worst = std::max({g.closure_residual(), g.jacobi_residual(), g.cartan_inclusion_residual(),
                      g.orthonormality_residual(), g.involution_residual()});
  r.pass = r.worst < tol && min_eig > 0.0;
  std::ostringstream os;
  os << g.spec().name() << ", min B_theta eigenvalue " << min_eig;
  r.note = os.str();
  return r;
}

LemmaResult check_z0(const MatrixLieAlgebra& g, const RootDatum& datum, double tol) {
  LemmaResult r;
  r.name = "z0_certificate";
  r.tolerance = tol;
  r.samples = static_cast<int>(datum.roots.size());
  r.worst = datum.z0_square_residual;
  for (const Root& a : datum.roots) {
    const double v = a.values.dot(datum.z0_torus);
    if (a.compact) r.worst = std::max(r.worst, std::abs(v));
    else if (a.positive) r.worst = std::max(r.worst, std::abs(v - 1.0));
  }
  r.pass = r.worst < tol;
  r.note = g.spec().name();
  return r;
}

LemmaResult check_chi_spectrum(const MatrixLieAlgebra& g, int samples, std::uint64_t seed, double tol) {
  LemmaResult r;
  r.name = "chi_spectrum";
  r.tolerance = tol;
  r.samples = samples;
  std::mt19937_64 rng(seed);
  double max_eig = 0.0;
  for (int i = 0; i < samples; ++i) {
    const ChiSpectrumCheck c = chi_spectrum_check(g, g.embed_p(random_p(g, rng, kLemmaRadius)), tol);
    r.worst = std::max(r.worst, c.multiset_error);
    max_eig = std::max(max_eig, c.max_abs_eigenvalue);
  }
  r.pass = r.worst < tol && max_eig < 1.0;
  std::ostringstream os;
  os << "max |eigenvalue| " << max_eig;
  r.note = os.str();
  return r;
}

LemmaResult check_hermitian_properness(const OrbitModel& model0, int samples, std::uint64_t seed, double slack) {
  const MatrixLieAlgebra& g = model0.algebra();
  LemmaResult r;
  r.name = "hermitian_properness";
  r.tolerance = slack;
  r.samples = samples;
  r.worst = std::numeric_limits<double>::infinity();
  const Vec z0k = model0.z0().head(g.dim_k());
  std::mt19937_64 rng(seed);
  for (int i = 0; i < samples; ++i) {
    const Vec z = random_p(g, rng, kLemmaRadius);
    const double lhs = hermitian_moment(model0, z, 1.0).dot(z0k);
    r.worst = std::min(r.worst, lhs - 0.5 * z.squaredNorm());
  }
  r.pass = r.worst >= -slack;
  r.note = "min of <Phi(Z) - lambda0, z0> - |Z|^2/2";
  return r;
}

LemmaResult check_flat_moment(const OrbitModel& model0, int samples, std::uint64_t seed, double tol) {
  const MatrixLieAlgebra& g = model0.algebra();
  LemmaResult r;
  r.name = "flat_moment";
  r.tolerance = tol;
  r.samples = samples;
  const Vec z0k = model0.z0().head(g.dim_k());
  std::mt19937_64 rng(seed);
  for (int i = 0; i < samples; ++i) {
    const Vec z = random_p(g, rng, kLemmaRadius);
    const double lhs = moment_flat_normalized(model0, z).dot(z0k) / kMomentConventions.flat_scale;
    r.worst = std::max(r.worst, std::abs(lhs - z.squaredNorm()));
  }
  r.pass = r.worst < tol;
  std::ostringstream os;
  os << "normalized moment divided by flat_scale " << kMomentConventions.flat_scale;
  r.note = os.str();
  return r;
}

LemmaResult check_bracket_inequality(const MatrixLieAlgebra& g, const RootDatum& datum, int samples, std::uint64_t seed,
                          double slack) {
  LemmaResult r;
  r.name = "bracket_inequality";
  r.tolerance = slack;
  r.samples = samples;
  r.worst = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  for (int i = 0; i < samples; ++i) {
    const ChamberWeight a = random_chamber_weight(g, datum, rng);
    const ChamberWeight b = random_chamber_weight(g, datum, rng);
    const Vec z = random_p(g, rng, kLemmaRadius);
    const BracketInequalityResult c = bracket_inequality_check(g, datum, a, b, z);
    r.worst = std::min(r.worst, c.lhs - c.rhs);
  }
  r.pass = r.worst >= -slack;
  r.note = "min of lhs - rhs";
  return r;
}

LemmaResult check_segment_nondegeneracy(const OrbitModel& model, double delta, int points, std::uint64_t seed) {
  LemmaResult r;
  r.name = "segment_nondegeneracy";
  r.tolerance = 0.0;
  r.samples = 21 * points;
  const std::vector<OrbitPoint> pts = sample_points(model, points, seed);
  std::vector<double> margin(pts.size());
  parallel_for(static_cast<int>(pts.size()), [&](int i) {
    const PointFrame f(model, pts[i]);
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= 20; ++j) m = std::min(m, nondegeneracy_margin(segment_matrix(f, j / 20.0, delta)));
    margin[i] = m;
  });
  r.worst = std::numeric_limits<double>::infinity();
  for (double m : margin) r.worst = std::min(r.worst, m);
  r.pass = r.worst > 0.0;
  std::ostringstream os;
  os << "min smallest singular value, delta " << delta;
  r.note = os.str();
  return r;
}

LemmaResult check_segment_affinity(const OrbitModel& model, double delta, int points, std::uint64_t seed) {
  LemmaResult r;
  r.name = "segment_affinity";
  r.tolerance = 1e-12;
  r.samples = 21 * points;
  for (const OrbitPoint& x : sample_points(model, points, seed)) {
    const PointFrame f(model, x);
    const Mat w0 = segment_matrix(f, 0.0, delta);
    const Mat w1 = segment_matrix(f, 1.0, delta);
    const double scale = std::max({1.0, w0.cwiseAbs().maxCoeff(), w1.cwiseAbs().maxCoeff()});
    for (int j = 0; j <= 20; ++j) {
      const double t = j / 20.0;
      const Mat dev = segment_matrix(f, t, delta) - (t * w1 + (1.0 - t) * w0);
      r.worst = std::max(r.worst, dev.cwiseAbs().maxCoeff() / scale);
    }
  }
  r.pass = r.worst < r.tolerance;
  r.note = "relative deviation from the affine interpolation";
  return r;
}

LemmaResult check_moment_identities(const OrbitModel& model, const OrbitModel& model0, double delta, int points,
                                    std::uint64_t seed, double tol) {
  LemmaResult r;
  r.name = "moment_identities";
  r.tolerance = tol;
  r.samples = 5 * points;
  const double ts = 0.3, th = 0.5;
  const FormAt f_pull = [&](const OrbitPoint& y) { return pullback_kks_matrix(PointFrame(model, y)); };
  const MomentAt m_pull = [&](const OrbitPoint& y) { return moment_pullback(model, y); };
  const FormAt f_prod = [&](const OrbitPoint&) { return product_matrix(model); };
  const MomentAt m_prod = [&](const OrbitPoint& y) { return moment_product_normalized(model, y); };
  const FormAt f_delta = [&](const OrbitPoint& y) { return delta_matrix(PointFrame(model, y), delta); };
  const MomentAt m_delta = [&](const OrbitPoint& y) { return moment_delta(model, y, delta); };
  const FormAt f_seg = [&](const OrbitPoint& y) { return segment_matrix(PointFrame(model, y), 1.0 - ts, delta); };
  const MomentAt m_seg = [&](const OrbitPoint& y) { return moment_segment(model, y, ts, delta); };
  const FormAt f_herm = [&](const OrbitPoint& y) { return hermitian_family(model0, y.z, th).matrix; };
  const MomentAt m_herm = [&](const OrbitPoint& y) { return hermitian_moment(model0, y.z, th); };

  const std::vector<OrbitPoint> pts = sample_points(model, points, seed);
  const std::vector<OrbitPoint> pts0 = sample_points(model0, points, derive_seed(seed, 1));
  double worst[5] = {0, 0, 0, 0, 0};
  for (int i = 0; i < points; ++i) {
    worst[0] = std::max(worst[0], moment_identity(model, f_pull, m_pull, pts[i]).residual);
    worst[1] = std::max(worst[1], moment_identity(model, f_prod, m_prod, pts[i]).residual);
    worst[2] = std::max(worst[2], moment_identity(model, f_delta, m_delta, pts[i]).residual);
    worst[3] = std::max(worst[3], moment_identity(model, f_seg, m_seg, pts[i]).residual);
    worst[4] = std::max(worst[4], moment_identity(model0, f_herm, m_herm, pts0[i]).residual);
  }
  r.worst = *std::max_element(worst, worst + 5);
  r.pass = r.worst < tol;
  std::ostringstream os;
  os << std::setprecision(3) << "pullback " << worst[0] << ", product " << worst[1] << ", delta " << worst[2]
     << ", segment " << worst[3] << ", hermitian " << worst[4];
  r.note = os.str();
  return r;
}

ReportConstants compute_constants(const ScenarioContext& ctx, const Scenario& s) {
  ReportConstants c;
  c.dim_g = ctx.g.dim();
  c.dim_k = ctx.g.dim_k();
  c.dim_p = ctx.g.dim_p();
  c.rank = ctx.g.torus_rank();
  c.dim_k_lambda = static_cast<int>(stabilizer_algebra(ctx.g, ctx.weight).stabilizer.cols());
  const ChamberConstants cc = chamber_constants(ctx.g, ctx.weight, ctx.datum);
  const ChamberTest t = in_holomorphic_chamber(ctx.weight, ctx.datum);
  c.m_lambda = cc.m;
  c.b_lambda = cc.b;
  c.chamber_margin = t.margin;
  c.compact_margin = t.compact_margin;
  c.delta = scenario_delta(s, cc.b);
  const OrbitModel model0(ctx.g, ctx.datum, weight_lambda0(ctx.g, ctx.datum));
  const MomentCalibration cal = calibrate_moment_conventions(model0, derive_seed(s.seed, 99));
  c.flat_scale = cal.flat_scale;
  c.product_fiber_scale = cal.product_fiber_scale;
  return c;
}

namespace {

std::vector<LemmaResult> lemma_suite(const ScenarioContext& ctx, const Scenario& s, const ReportConstants& c) {
  const Tolerances& tol = s.tolerances;
  const OrbitModel model(ctx.g, ctx.datum, ctx.weight);
  const OrbitModel model0(ctx.g, ctx.datum, weight_lambda0(ctx.g, ctx.datum));
  const int n = s.lemma_samples;
  std::vector<LemmaResult> out;
  out.push_back(check_structure(ctx.g, tol.structure));
  out.push_back(check_z0(ctx.g, ctx.datum, tol.z0));
  out.push_back(check_chi_spectrum(ctx.g, n, derive_seed(s.seed, 1), tol.chi));
  out.push_back(check_hermitian_properness(model0, n, derive_seed(s.seed, 2), tol.lemma_slack));
  out.push_back(check_flat_moment(model0, n, derive_seed(s.seed, 3), tol.flat_identity));
  out.push_back(check_bracket_inequality(ctx.g, ctx.datum, n, derive_seed(s.seed, 4), tol.lemma_slack));
  if (c.delta > c.b_lambda) {
    out.push_back(check_segment_nondegeneracy(model, c.delta, 200, derive_seed(s.seed, 5)));
    out.push_back(check_segment_affinity(model, c.delta, 20, derive_seed(s.seed, 6)));
  }
  out.push_back(check_moment_identities(model, model0, c.delta, 4, derive_seed(s.seed, 7), tol.moment_identity));
  return out;
}

} // namespace

FlowReport run_lemma_suite(const Scenario& s) {
  const auto t0 = Clock::now();
  s.validate();
  const auto ctx = ScenarioContext::build(s);
  FlowReport r;
  r.scenario = s;
  r.constants = compute_constants(*ctx, s);
  r.lemmas = lemma_suite(*ctx, s, r.constants);
  r.timing.lemma_seconds = seconds_since(t0);
  r.timing.total_seconds = r.timing.lemma_seconds;
  r.update_verdict();
  return r;
}

StageReport run_stage(const std::string& name, const FormFamily& family, const Scenario& s, std::uint64_t seed) {
  const OrbitModel& model = family.model();
  const Tolerances& tol = s.tolerances;
  StageReport st;
  st.name = name;
  st.family = family.name();
  st.steps = s.steps;
  st.samples = s.flow_samples;

  const std::vector<OrbitPoint> zs = zero_section_points(model, s.flow_samples, derive_seed(seed, 0));
  const HomotopyPrimitive mu(family);
  st.primitive_zero_section = mu.zero_section_residual(zs, {0.0, 0.5, 1.0});

  HypothesisOptions ho;
  ho.seed = derive_seed(seed, 1);
  ho.stokes_tol = tol.stokes;
  ho.orthogonality_tol = tol.orthogonality;
  ho.gauge_tol = tol.gauge;
  ho.properness_slack = tol.properness_slack;
  st.hypotheses = check_hypotheses(family, mu, zs, ho);
  if (!st.hypotheses.pass() || st.primitive_zero_section > tol::kIdentity) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    st.pullback_residual = st.moment_spread = st.zero_section_fix = nan;
    return st;
  }

  FlowOptions fo;
  fo.steps = s.steps;
  const PointMap rho = flow_map(family, mu, fo);
  const std::vector<OrbitPoint> pts = sample_points(model, s.flow_samples, derive_seed(seed, 2));
  const FormAt src = [&](const OrbitPoint& y) { return family.form(y, 0.0); };
  const FormAt tgt = [&](const OrbitPoint& y) { return family.form(y, 1.0); };
  st.pullback_residual = verify_pullback(model, rho, src, tgt, pts, {s.eps, s.stencil}).max_residual;
  const MomentAt ms = [&](const OrbitPoint& y) { return family.moment(y, 0.0); };
  const MomentAt mt = [&](const OrbitPoint& y) { return family.moment(y, 1.0); };
  st.moment_spread = moment_shift_spread(rho, ms, mt, pts);
  for (const OrbitPoint& x : zs) st.zero_section_fix = std::max(st.zero_section_fix, point_distance(model, rho(x), x));

  st.pass = st.pullback_residual < tol.stage_pullback && st.moment_spread < tol.moment_spread &&
            st.zero_section_fix < tol.zero_section;
  return st;
}

PointMap extend_by_identity(const OrbitModel& model0, PointMap fiber_map) {
  const int n = model0.algebra().matrix_size();
  return [fiber_map = std::move(fiber_map), n](const OrbitPoint& x) {
    const OrbitPoint y = fiber_map({CMat::Identity(n, n), x.z});
    return OrbitPoint{x.k, y.z};
  };
}

FlowReport run_theorem_pipeline(const Scenario& s) {
  const auto t0 = Clock::now();
  s.validate();
  const auto ctx = ScenarioContext::build(s);
  FlowReport r;
  r.scenario = s;
  r.constants = compute_constants(*ctx, s);
  const double delta = r.constants.delta;
  if (!(delta > r.constants.b_lambda)) {
    std::ostringstream os;
    os << "delta " << delta << " does not exceed b_lambda " << r.constants.b_lambda << "; refusing to flow";
    throw DomainError(os.str());
  }
  r.lemmas = lemma_suite(*ctx, s, r.constants);
  r.timing.lemma_seconds = seconds_since(t0);

  const OrbitModel model(ctx->g, ctx->datum, ctx->weight);
  const OrbitModel model0(ctx->g, ctx->datum, weight_lambda0(ctx->g, ctx->datum));
  const HermitianFamily hermitian(model0);
  const ScalingFamily scaling(model0, delta);
  const SegmentFamily segment(model, delta);
  const FormFamily* families[3] = {&hermitian, &scaling, &segment};
  const char* names[3] = {"hermitian", "scaling", "segment"};

  bool flows_ok = true;
  for (int i = 0; i < 3; ++i) {
    const auto ts = Clock::now();
    r.stages.push_back(run_stage(names[i], *families[i], s, derive_seed(s.seed, 10 + i)));
    r.timing.stage_seconds.push_back(seconds_since(ts));
    flows_ok = flows_ok && r.stages.back().hypotheses.pass();
  }

  if (flows_ok) {
    const auto tc = Clock::now();
    const HomotopyPrimitive mu1(hermitian), mu2(scaling), mu3(segment);
    FlowOptions fo;
    fo.steps = s.steps;
    const PointMap r1 = extend_by_identity(model0, flow_map(hermitian, mu1, fo));
    const PointMap r2 = extend_by_identity(model0, flow_map(scaling, mu2, fo));
    const PointMap r3 = flow_map(segment, mu3, fo);
    const PointMap rho = [&](const OrbitPoint& x) { return r3(r2(r1(x))); };

    const Tolerances& tol = s.tolerances;
    CompositeReport c;
    c.samples = s.samples;
    const std::vector<OrbitPoint> pts = sample_points(model, s.samples, derive_seed(s.seed, 20));
    const FormAt src = [&](const OrbitPoint&) { return product_matrix(model); };
    const FormAt tgt = [&](const OrbitPoint& y) { return pullback_kks_matrix(PointFrame(model, y)); };
    c.pullback_residual = verify_pullback(model, rho, src, tgt, pts, {s.eps, s.stencil}).max_residual;
    const MomentAt ms = [&](const OrbitPoint& y) { return moment_product_normalized(model, y); };
    const MomentAt mt = [&](const OrbitPoint& y) { return moment_pullback(model, y); };
    c.moment_spread = moment_shift_spread(rho, ms, mt, pts);

    const std::vector<OrbitPoint> zs = zero_section_points(model, s.flow_samples, derive_seed(s.seed, 21));
    std::vector<double> fix(zs.size());
    parallel_for(static_cast<int>(zs.size()), [&](int i) { fix[i] = point_distance(model, rho(zs[i]), zs[i]); });
    for (double v : fix) c.zero_section_fix = std::max(c.zero_section_fix, v);

    std::mt19937_64 rng(derive_seed(s.seed, 22));
    std::vector<CMat> ks;
    std::vector<OrbitPoint> xs;
    for (int i = 0; i < s.flow_samples; ++i) {
      ks.push_back(random_k(ctx->g, rng));
      xs.push_back(random_point(model, rng, kSampleRadius));
    }
    std::vector<double> eq(xs.size());
    parallel_for(static_cast<int>(xs.size()), [&](int i) {
      eq[i] = point_distance(model, rho(act(model, ks[i], xs[i])), act(model, ks[i], rho(xs[i])));
    });
    for (double v : eq) c.equivariance = std::max(c.equivariance, v);

    c.pass = c.pullback_residual < tol.composite_pullback && c.zero_section_fix < tol.zero_section &&
             c.equivariance < tol.equivariance && c.moment_spread < tol.moment_spread;
    r.composite = c;
    r.timing.composite_seconds = seconds_since(tc);
  } else {
    CompositeReport c;
    c.pullback_residual = c.zero_section_fix = c.equivariance = c.moment_spread =
        std::numeric_limits<double>::quiet_NaN();
    r.composite = c;
  }
  r.timing.total_seconds = seconds_since(t0);
  r.update_verdict();
  return r;
}

std::string inspect_model(const Scenario& s, bool as_json) {
  const auto ctx = ScenarioContext::build(s);
  const MatrixLieAlgebra& g = ctx->g;
  const RootDatum& d = ctx->datum;
  const ChamberTest t = in_holomorphic_chamber(ctx->weight, d);
  const ChamberConstants cc = chamber_constants(g, ctx->weight, d);
  const ChamberWeight l0 = weight_lambda0(g, d);
  const int dim_k_lambda = static_cast<int>(stabilizer_algebra(g, ctx->weight).stabilizer.cols());
  const double pairing = g.b_theta(l0.h, d.z0);
  auto fin = [](double x) { return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json("inf"); };

  nlohmann::ordered_json j;
  j["algebra"] = g.spec().name();
  j["dim_g"] = g.dim();
  j["dim_k"] = g.dim_k();
  j["dim_p"] = g.dim_p();
  j["rank"] = g.torus_rank();
  j["matrix_size"] = g.matrix_size();
  j["root_count"] = d.roots.size();
  j["compact_root_count"] = d.compact_count();
  j["noncompact_root_count"] = d.noncompact_count();
  auto roots = nlohmann::ordered_json::array();
  for (const Root& a : d.roots) {
    nlohmann::ordered_json e;
    e["values"] = std::vector<double>(a.values.data(), a.values.data() + a.values.size());
    e["compact"] = a.compact;
    e["positive"] = a.positive;
    e["value_at_z0"] = a.values.dot(d.z0_torus);
    roots.push_back(e);
  }
  j["roots"] = roots;
  j["z0"] = std::vector<double>(d.z0.data(), d.z0.data() + d.z0.size());
  j["z0_torus"] = std::vector<double>(d.z0_torus.data(), d.z0_torus.data() + d.z0_torus.size());
  j["z0_norm_squared"] = d.z0.squaredNorm();
  j["lambda0_z0_pairing"] = pairing;
  j["z0_square_residual"] = d.z0_square_residual;
  j["lambda_torus"] = std::vector<double>(ctx->weight.torus.data(), ctx->weight.torus.data() + ctx->weight.torus.size());
  j["chamber_margin"] = t.margin;
  j["compact_margin"] = fin(t.compact_margin);
  j["m_lambda"] = cc.m;
  j["b_lambda"] = cc.b;
  j["dim_k_lambda"] = dim_k_lambda;
  j["orbit_dim"] = g.dim_k() - dim_k_lambda + g.dim_p();
  if (as_json) return j.dump(2) + "\n";

  auto chop = [](double x) { return std::abs(x) < 1e-12 ? 0.0 : x; };
  std::ostringstream os;
  os << std::setprecision(6);
  os << g.spec().name() << "  dim g " << g.dim() << "  dim k " << g.dim_k() << "  dim p " << g.dim_p() << "  rank "
     << g.torus_rank() << "\n";
  os << "roots " << d.roots.size() << " (" << d.compact_count() << " compact, " << d.noncompact_count()
     << " noncompact)\n";
  for (const Root& a : d.roots) {
    os << "  [";
    for (Eigen::Index i = 0; i < a.values.size(); ++i) os << (i ? ", " : "") << std::setw(10) << chop(a.values(i));
    os << "]  " << (a.compact ? "compact   " : "noncompact") << "  " << (a.positive ? "+" : "-") << "  at z0 "
       << chop(a.values.dot(d.z0_torus)) << "\n";
  }
  os << "z0 torus coords " << d.z0_torus.transpose() << "\n";
  os << "|z0|^2 " << d.z0.squaredNorm() << "  <lambda0, z0> " << pairing << "\n";
  os << "lambda torus coords " << ctx->weight.torus.transpose() << "\n";
  os << "chamber margin " << chop(t.margin) << "  compact margin " << chop(t.compact_margin) << "\n";
  os << "m_lambda " << cc.m << "  b_lambda " << cc.b << "  dim k_lambda " << dim_k_lambda << "\n";
  return os.str();
}

} // namespace hcorbit
