// Acceptance run: one line per criterion, exit status 1 if any line fails.

#include "hcorbit/moser.hpp"
#include "hcorbit/pipeline.hpp"
#include "hcorbit/report.hpp"
#include "hcorbit/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace hcorbit;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void line(int id, const std::string& title, bool pass, const std::string& detail, double secs) {
  if (!pass) ++failures;
  std::printf("[%s] C%-2d %-28s %s (%.2f s)\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Desk {
  MatrixLieAlgebra g;
  RootDatum d;
};

std::vector<Desk> desk() {
  std::vector<Desk> out;
  for (const auto& s : {AlgebraSpec::su(1, 1), AlgebraSpec::su(2, 1), AlgebraSpec::sp(1), AlgebraSpec::sp(2)}) {
    auto g = build_algebra(s);
    auto d = compute_root_datum(g);
    out.push_back({std::move(g), std::move(d)});
  }
  return out;
}

Scenario su21_scenario() {
  Scenario s;
  s.family = "su";
  s.p = 2;
  s.q = 1;
  s.lambda_diag = {0.6, 0.1, -0.7};
  s.delta_mult = 1.5;
  s.samples = 50;
  s.seed = 1;
  return s;
}

double max_worst(const std::vector<LemmaResult>& rs) {
  double w = 0.0;
  for (const auto& r : rs) w = std::max(w, r.worst);
  return w;
}

double min_worst(const std::vector<LemmaResult>& rs) {
  double w = INFINITY;
  for (const auto& r : rs) w = std::min(w, r.worst);
  return w;
}

bool all(const std::vector<LemmaResult>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const LemmaResult& r) { return r.pass; });
}

} // namespace

int main() {
  const auto t_all = Clock::now();
  const std::vector<Desk> algebras = desk();

  { // 1
    const auto t0 = Clock::now();
    std::vector<LemmaResult> rs;
    for (const auto& spec : {AlgebraSpec::su(1, 1), AlgebraSpec::su(2, 1), AlgebraSpec::su(2, 2), AlgebraSpec::su(3, 1),
                             AlgebraSpec::sp(1), AlgebraSpec::sp(2), AlgebraSpec::sp(3)})
      rs.push_back(check_structure(build_algebra(spec), 1e-10));
    const double secs = seconds_since(t0);
    line(1, "structure", all(rs) && max_worst(rs) < 1e-10 && secs < 1.0,
         fmt("worst %.2e < 1e-10 over 7 algebras, < 1 s", max_worst(rs)), secs);
  }
  { // 2
    const auto t0 = Clock::now();
    std::vector<LemmaResult> rs;
    for (const auto& a : algebras) rs.push_back(check_z0(a.g, a.d, 1e-10));
    line(2, "z0 certificate", all(rs) && max_worst(rs) < 1e-10, fmt("worst %.2e < 1e-10", max_worst(rs)),
         seconds_since(t0));
  }
  { // 3
    const auto t0 = Clock::now();
    std::vector<LemmaResult> rs;
    for (std::size_t i = 0; i < algebras.size(); ++i)
      rs.push_back(check_chi_spectrum(algebras[i].g, 1000, derive_seed(3, static_cast<int>(i)), 1e-8));
    line(3, "chi spectrum", all(rs) && max_worst(rs) < 1e-8,
         fmt("multiset error %.2e < 1e-8, 1000 Z per algebra, |eig| < 1", max_worst(rs)), seconds_since(t0));
  }
  { // 4
    const auto t0 = Clock::now();
    std::vector<LemmaResult> prop, flat;
    for (std::size_t i = 0; i < algebras.size(); ++i) {
      const OrbitModel m0(algebras[i].g, algebras[i].d, weight_lambda0(algebras[i].g, algebras[i].d));
      prop.push_back(check_hermitian_properness(m0, 1000, derive_seed(4, static_cast<int>(i)), 1e-10));
      flat.push_back(check_flat_moment(m0, 1000, derive_seed(40, static_cast<int>(i)), 1e-10));
    }
    const bool ok = all(prop) && all(flat) && min_worst(prop) >= -1e-10 && max_worst(flat) < 1e-10;
    char buf[160];
    std::snprintf(buf, sizeof buf, "properness slack %.2e >= -1e-10, flat residual %.2e < 1e-10 (scale %.1f)",
                  min_worst(prop), max_worst(flat), kMomentConventions.flat_scale);
    line(4, "hermitian moment lemmas", ok, buf, seconds_since(t0));
  }
  { // 5
    const auto t0 = Clock::now();
    const Desk& a = algebras[1];
    const LemmaResult r = check_bracket_inequality(a.g, a.d, 1000, derive_seed(5, 0), 1e-10);
    line(5, "bracket inequality su(2,1)", r.pass && r.worst >= -1e-10,
         fmt("worst slack %.2e >= -1e-10 over 1000 samples", r.worst), seconds_since(t0));
  }

  const Scenario s21 = su21_scenario();
  const auto ctx = ScenarioContext::build(s21);
  const ReportConstants c21 = compute_constants(*ctx, s21);
  const OrbitModel m21(ctx->g, ctx->datum, ctx->weight);
  const OrbitModel m21_0(ctx->g, ctx->datum, weight_lambda0(ctx->g, ctx->datum));

  { // 6
    const auto t0 = Clock::now();
    const LemmaResult nd = check_segment_nondegeneracy(m21, c21.delta, 200, derive_seed(6, 0));
    const LemmaResult af = check_segment_affinity(m21, c21.delta, 50, derive_seed(6, 1));
    char buf[160];
    std::snprintf(buf, sizeof buf, "delta = 1.5 b = %.4f, min margin %.4f > 0 (21 t x 200 points), affinity %.1e",
                  c21.delta, nd.worst, af.worst);
    line(6, "segment nondegeneracy", nd.pass && nd.worst > 0.0 && af.pass, buf, seconds_since(t0));
  }
  { // 7
    const auto t0 = Clock::now();
    const LemmaResult r = check_moment_identities(m21, m21_0, c21.delta, 4, derive_seed(7, 0), 1e-6);
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "five pairs, residual %.2e < 1e-6 at eps 1e-5; conventions flat %.6f, product fiber %.6f",
                  r.worst, c21.flat_scale, c21.product_fiber_scale);
    const bool conv = std::abs(c21.flat_scale - kMomentConventions.flat_scale) < 1e-6 &&
                      std::abs(c21.product_fiber_scale - kMomentConventions.product_fiber_scale) < 1e-6;
    line(7, "moment identities", r.pass && r.worst < 1e-6 && conv, buf, seconds_since(t0));
  }
  { // 8
    const auto t0 = Clock::now();
    const auto g = build_algebra(AlgebraSpec::su(1, 1));
    const auto d = compute_root_datum(g);
    const OrbitModel m0(g, d, weight_lambda0(g, d));
    const HermitianFamily fam(m0);
    const HomotopyPrimitive mu(fam);
    std::mt19937_64 rng(derive_seed(8, 0));
    std::vector<OrbitPoint> pts, zero;
    for (int i = 0; i < 8; ++i) pts.push_back(random_point(m0, rng, 1.0));
    for (int i = 0; i < 8; ++i) zero.push_back({random_k(g, rng), Vec::Zero(g.dim_p())});
    const FormAt src = [&](const OrbitPoint& y) { return fam.form(y, 0.0); };
    const FormAt dst = [&](const OrbitPoint& y) { return fam.form(y, 1.0); };
    auto residual = [&](int steps, int stencil) {
      return verify_pullback(m0, flow_map(fam, mu, {steps}), src, dst, pts, {1e-4, stencil}).max_residual;
    };
    const double r200 = residual(200, 2);
    const PointMap rho = flow_map(fam, mu, {200});
    double fix = 0.0;
    for (const auto& x : zero) fix = std::max(fix, point_distance(m0, rho(x), x));
    const double r10 = residual(10, 4), r20 = residual(20, 4);
    const double r200q = residual(200, 4), r400q = residual(400, 4);
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "200 steps %.2e < 1e-4, zero fix %.1e < 1e-8, drop 10->20 steps %.1fx >= 8 "
                  "(200->400: %.1fx, FD floor)",
                  r200, fix, r10 / r20, r200q / r400q);
    line(8, "hermitian stage su(1,1)", r200 < 1e-4 && fix < 1e-8 && r10 / r20 >= 8.0, buf, seconds_since(t0));
  }

  FlowReport full;
  { // 9
    const auto t0 = Clock::now();
    full = run_theorem_pipeline(s21);
    bool ok = full.composite.has_value();
    char buf[240] = "no composite";
    if (ok) {
      const CompositeReport& c = *full.composite;
      ok = c.samples == 50 && c.pullback_residual < 1e-3 && c.zero_section_fix < 1e-6 && c.equivariance < 1e-6 &&
           c.moment_spread < 1e-5;
      std::snprintf(buf, sizeof buf,
                    "pullback %.2e < 1e-3 (50 pts), zero fix %.1e < 1e-6, equivariance %.1e < 1e-6, "
                    "spread %.1e < 1e-5",
                    c.pullback_residual, c.zero_section_fix, c.equivariance, c.moment_spread);
    }
    line(9, "three-stage map su(2,1)", ok && full.verdict == "pass", buf, seconds_since(t0));
  }
  { // 10
    const auto t0 = Clock::now();
    const auto g = build_algebra(AlgebraSpec::su(1, 1));
    const auto d = compute_root_datum(g);
    const OrbitModel m0(g, d, weight_lambda0(g, d));
    const HermitianFamily fam(m0);
    const HomotopyPrimitive mu(fam);
    std::mt19937_64 rng(derive_seed(10, 0));
    std::vector<OrbitPoint> zero;
    for (int i = 0; i < 4; ++i) zero.push_back({random_k(g, rng), Vec::Zero(g.dim_p())});
    HypothesisOptions ho;
    ho.seed = derive_seed(10, 1);
    std::vector<std::pair<std::string, HypothesisReport>> hs{{"su(1,1) hermitian", check_hypotheses(fam, mu, zero, ho)}};
    for (const StageReport& st : full.stages)
      if (st.name == "hermitian" || st.name == "segment") hs.push_back({"su(2,1) " + st.name, st.hypotheses});
    bool ok = hs.size() == 3;
    std::string detail;
    int two_sided = 0;
    for (const auto& [name, h] : hs) {
      const double ratio = h.fitted_d / h.bound_d;
      ok = ok && ratio >= 0.95;
      if (std::abs(ratio - 1.0) <= 0.05) ++two_sided;
      char buf[96];
      std::snprintf(buf, sizeof buf, "%s d/bound %.3f; ", name.c_str(), ratio);
      detail += buf;
    }
    detail += "required >= 0.95 (" + std::to_string(two_sided) + "/" + std::to_string(hs.size()) +
              " also within 5% above)";
    line(10, "properness constants", ok, detail, seconds_since(t0));
  }
  { // 11
    const auto t0 = Clock::now();
    Scenario s11;
    const std::string a = to_json_string(run_theorem_pipeline(s11), false);
    const std::string b = to_json_string(run_theorem_pipeline(s11), false);
    const std::string c = to_json_string(run_lemma_suite(s21), false);
    const std::string e = to_json_string(run_lemma_suite(s21), false);
    line(11, "determinism", a == b && c == e,
         fmt("su(1,1) theorem and su(2,1) lemma reports identical without timing (%.0f bytes)",
             static_cast<double>(a.size() + c.size())),
         seconds_since(t0));
  }

  std::printf("total %.1f s, %d failing criteria\n", seconds_since(t_all), failures);
  return failures == 0 ? 0 : 1;
}
