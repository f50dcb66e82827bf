#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hcorbit/pipeline.hpp"
#include "hcorbit/report.hpp"
#include "hcorbit/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>

using namespace hcorbit;

namespace {

Scenario small_su11() {
  Scenario s;
  s.steps = 10;
  s.samples = 3;
  s.flow_samples = 2;
  s.lemma_samples = 50;
  return s;
}

} // namespace

TEST_CASE("scenario parsing") {
  const Scenario s = parse_scenario(R"(# su(2,1) with a generic weight
family = su
p = 2   # trailing comment
q = 1
lambda_diag = 0.6, 0.1, -0.7
steps = 120
delta = 2.5
tolerances.composite_pullback = 5e-4
)");
  CHECK(s.family == "su");
  CHECK(s.p == 2);
  CHECK(s.q == 1);
  CHECK(s.lambda_diag == std::vector<double>{0.6, 0.1, -0.7});
  CHECK(s.steps == 120);
  REQUIRE(s.delta.has_value());
  CHECK(*s.delta == 2.5);
  CHECK(s.tolerances.composite_pullback == 5e-4);
  CHECK(s.tolerances.at("composite_pullback") == 5e-4);
  CHECK(s.algebra().name() == AlgebraSpec::su(2, 1).name());
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("scenario errors") {
  CHECK_THROWS_AS(parse_scenario("colour = red\n"), DomainError);
  CHECK_THROWS_AS(parse_scenario("steps = many\n"), DomainError);
  CHECK_THROWS_AS(parse_scenario("tolerances.bogus = 1\n"), DomainError);
  CHECK_THROWS_AS(parse_scenario("family = so\n").algebra(), DomainError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.cfg"), DomainError);
  for (const char* bad : {"delta_mult = 1.0\n", "steps = 5\n", "samples = 0\n", "eps = 0\n", "stencil = 3\n",
                          "delta = -1\n", "tolerances.gauge = 0\n"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_scenario(bad).validate(), DomainError);
  }
  Scenario both;
  both.family = "su";
  both.p = 2;
  both.q = 1;
  both.lambda = {1.0, 0.0};
  both.lambda_diag = {0.6, 0.1, -0.7};
  const auto g = build_algebra(both.algebra());
  const auto d = compute_root_datum(g);
  CHECK_THROWS_AS(both.weight(g, d), DomainError);
}

TEST_CASE("key overrides") {
  Scenario s;
  s.set("seed", "42");
  s.set("delta_mult", "2.25");
  s.set("tolerances.stokes", "1e-3");
  CHECK(s.seed == 42);
  CHECK(s.delta_mult == 2.25);
  CHECK(s.tolerances.stokes == 1e-3);
  CHECK_THROWS_AS(s.set("nope", "1"), DomainError);
}

TEST_CASE("config text round trip") {
  Scenario s;
  s.family = "sp";
  s.n = 2;
  s.lambda = {1.5, 0.75};
  s.seed = 9;
  s.eps = 3e-5;
  s.delta = 4.0;
  s.tolerances.moment_spread = 2e-5;
  const Scenario r = parse_scenario(to_config_text(s));
  CHECK(r.family == s.family);
  CHECK(r.n == s.n);
  CHECK(r.lambda == s.lambda);
  CHECK(r.seed == s.seed);
  CHECK(r.eps == s.eps);
  CHECK(r.delta == s.delta);
  for (const auto& name : Tolerances::names()) CHECK(r.tolerances.at(name) == s.tolerances.at(name));
}

TEST_CASE("report json round trip and verdict") {
  FlowReport r;
  r.lemmas.push_back({"structure", true, 1e-15, 1e-10, 4, ""});
  r.lemmas.push_back({"z0", true, 0.0, 1e-10, 1, "certificate"});
  r.constants.compact_margin = std::numeric_limits<double>::infinity();
  StageReport st;
  st.name = "hermitian";
  st.family = "hermitian";
  st.pullback_residual = std::numeric_limits<double>::quiet_NaN();
  st.pass = true;
  r.stages.push_back(st);
  r.composite = CompositeReport{1e-6, 0.0, 1e-15, 1e-12, 50, true};
  r.update_verdict();
  CHECK(r.verdict == "pass");

  const std::string text = to_json_string(r);
  const auto j = nlohmann::json::parse(text);
  CHECK(j.at("schema_version") == kReportSchemaVersion);
  CHECK(j.at("constants").at("compact_margin") == "inf");
  CHECK(j.at("lemmas").contains("z0"));

  const FlowReport back = from_json_string(text);
  CHECK(back.verdict == "pass");
  CHECK(std::isinf(back.constants.compact_margin));
  CHECK(std::isnan(back.stages.at(0).pullback_residual));
  CHECK(back.lemmas.size() == 2);
  CHECK(back.composite.has_value());
  CHECK(to_json_string(back) == text);

  r.composite->pass = false;
  r.update_verdict();
  CHECK(r.verdict == "fail");
  CHECK_FALSE(FlowReport{}.all_pass());

  CHECK_THROWS_AS(from_json_string("{"), DomainError);
  auto wrong = nlohmann::json::parse(text);
  wrong["schema_version"] = kReportSchemaVersion + 1;
  CHECK_THROWS_AS(from_json_string(wrong.dump()), DomainError);
}

TEST_CASE("timing is omitted on request") {
  FlowReport r;
  r.timing.total_seconds = 3.0;
  CHECK(nlohmann::json::parse(to_json_string(r, true)).contains("timing"));
  CHECK_FALSE(nlohmann::json::parse(to_json_string(r, false)).contains("timing"));
}

TEST_CASE("derived seeds are distinct and reproducible") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("su(1,1) lemma suite passes") {
  Scenario s = small_su11();
  s.lemma_samples = 200;
  const FlowReport r = run_lemma_suite(s);
  for (const auto& l : r.lemmas) {
    CAPTURE(l.name);
    CAPTURE(l.worst);
    CHECK(l.pass);
  }
  CHECK(r.verdict == "pass");
  CHECK(r.constants.m_lambda == doctest::Approx(1.0));
  CHECK(r.constants.b_lambda == doctest::Approx(1.0));
  CHECK(r.constants.flat_scale == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.constants.product_fiber_scale == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("a weight outside the chamber is refused") {
  Scenario s;
  s.p = 2;
  s.lambda_diag = {-0.6, -0.1, 0.7};
  CHECK_THROWS_AS(ScenarioContext::build(s), DomainError);
  CHECK_THROWS_AS(run_lemma_suite(s), DomainError);
}

TEST_CASE("doubling the weight doubles m and b") {
  Scenario s;
  s.p = 2;
  s.lambda_diag = {0.6, 0.1, -0.7};
  const auto a = ScenarioContext::build(s);
  const ReportConstants ca = compute_constants(*a, s);
  s.lambda_diag = {1.2, 0.2, -1.4};
  const auto b = ScenarioContext::build(s);
  const ReportConstants cb = compute_constants(*b, s);
  CHECK(cb.m_lambda == doctest::Approx(2.0 * ca.m_lambda).epsilon(1e-12));
  CHECK(cb.b_lambda == doctest::Approx(2.0 * ca.b_lambda).epsilon(1e-12));
  CHECK(ca.m_lambda == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(ca.delta == doctest::Approx(1.5 * ca.b_lambda).epsilon(1e-14));
}

TEST_CASE("the theorem pipeline refuses delta below b_lambda") {
  Scenario s = small_su11();
  s.delta = 0.5;
  CHECK_THROWS_AS(run_theorem_pipeline(s), DomainError);
}

TEST_CASE("inspect") {
  Scenario s;
  s.p = 2;
  const auto j = nlohmann::json::parse(inspect_model(s, true));
  CHECK(j.at("dim_g") == 8);
  CHECK(j.at("root_count") == 6);
  CHECK(j.at("compact_root_count") == 2);
  CHECK(j.at("orbit_dim") == 4);

  const auto j1 = nlohmann::json::parse(inspect_model(Scenario{}, true));
  CHECK(j1.at("lambda0_z0_pairing").get<double>() ==
        doctest::Approx(j1.at("z0_norm_squared").get<double>()).epsilon(1e-14));
  CHECK(j1.at("compact_margin") == "inf");

  Scenario sp;
  sp.family = "sp";
  const auto j2 = nlohmann::json::parse(inspect_model(sp, true));
  for (const char* k : {"dim_g", "dim_k", "dim_p", "rank", "root_count", "orbit_dim"}) CHECK(j1.at(k) == j2.at(k));
  CHECK_FALSE(inspect_model(s, false).empty());
}

TEST_CASE("runs are deterministic for a fixed seed") {
  const Scenario s = small_su11();
  const std::string a = to_json_string(run_theorem_pipeline(s), false);
  const std::string b = to_json_string(run_theorem_pipeline(s), false);
  CHECK(a == b);
  Scenario t = s;
  t.seed = 2;
  CHECK(to_json_string(run_lemma_suite(t), false) != to_json_string(run_lemma_suite(s), false));
}
