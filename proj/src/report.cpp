#include "hcorbit/report.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>

namespace hcorbit {

using nlohmann::ordered_json;

namespace {

ordered_json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double get_num(const ordered_json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw DomainError("bad number '" + s + "'");
  }
  return j.get<double>();
}

ordered_json scenario_json(const Scenario& s) {
  ordered_json j;
  j["family"] = s.family;
  j["p"] = s.p;
  j["q"] = s.q;
  j["n"] = s.n;
  j["lambda"] = s.lambda;
  j["lambda_diag"] = s.lambda_diag;
  j["delta_mult"] = num(s.delta_mult);
  j["delta"] = s.delta ? num(*s.delta) : ordered_json(nullptr);
  j["steps"] = s.steps;
  j["samples"] = s.samples;
  j["flow_samples"] = s.flow_samples;
  j["lemma_samples"] = s.lemma_samples;
  j["eps"] = num(s.eps);
  j["stencil"] = s.stencil;
  j["seed"] = s.seed;
  j["out"] = s.out;
  ordered_json t;
  for (const auto& name : Tolerances::names()) t[name] = num(s.tolerances.at(name));
  j["tolerances"] = t;
  return j;
}

Scenario scenario_from(const ordered_json& j) {
  Scenario s;
  s.family = j.at("family").get<std::string>();
  s.p = j.at("p").get<int>();
  s.q = j.at("q").get<int>();
  s.n = j.at("n").get<int>();
  s.lambda = j.at("lambda").get<std::vector<double>>();
  s.lambda_diag = j.at("lambda_diag").get<std::vector<double>>();
  s.delta_mult = get_num(j.at("delta_mult"));
  if (!j.at("delta").is_null()) s.delta = get_num(j.at("delta"));
  s.steps = j.at("steps").get<int>();
  s.samples = j.at("samples").get<int>();
  s.flow_samples = j.at("flow_samples").get<int>();
  s.lemma_samples = j.at("lemma_samples").get<int>();
  s.eps = get_num(j.at("eps"));
  s.stencil = j.at("stencil").get<int>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.out = j.at("out").get<std::string>();
  for (const auto& [k, v] : j.at("tolerances").items()) s.tolerances.at(k) = get_num(v);
  return s;
}

ordered_json hypotheses_json(const HypothesisReport& h) {
  ordered_json j;
  j["stokes_max_rel_error"] = num(h.stokes_max_rel_error);
  j["zero_section_moment_sup"] = num(h.zero_section_moment_sup);
  j["orthogonality_residual"] = num(h.orthogonality_residual);
  j["zero_section_field"] = num(h.zero_section_field);
  j["fitted_d"] = num(h.fitted_d);
  j["fitted_gamma"] = num(h.fitted_gamma);
  j["bound_d"] = num(h.bound_d);
  j["gauge_max"] = num(h.gauge_max);
  j["kernel_residual"] = num(h.kernel_residual);
  j["stokes_ok"] = h.stokes_ok;
  j["bounded_ok"] = h.bounded_ok;
  j["orthogonality_ok"] = h.orthogonality_ok;
  j["properness_ok"] = h.properness_ok;
  j["gauge_ok"] = h.gauge_ok;
  j["kernel_ok"] = h.kernel_ok;
  j["pass"] = h.pass();
  return j;
}

HypothesisReport hypotheses_from(const ordered_json& j) {
  HypothesisReport h;
  h.stokes_max_rel_error = get_num(j.at("stokes_max_rel_error"));
  h.zero_section_moment_sup = get_num(j.at("zero_section_moment_sup"));
  h.orthogonality_residual = get_num(j.at("orthogonality_residual"));
  h.zero_section_field = get_num(j.at("zero_section_field"));
  h.fitted_d = get_num(j.at("fitted_d"));
  h.fitted_gamma = get_num(j.at("fitted_gamma"));
  h.bound_d = get_num(j.at("bound_d"));
  h.gauge_max = get_num(j.at("gauge_max"));
  h.kernel_residual = get_num(j.at("kernel_residual"));
  h.stokes_ok = j.at("stokes_ok").get<bool>();
  h.bounded_ok = j.at("bounded_ok").get<bool>();
  h.orthogonality_ok = j.at("orthogonality_ok").get<bool>();
  h.properness_ok = j.at("properness_ok").get<bool>();
  h.gauge_ok = j.at("gauge_ok").get<bool>();
  h.kernel_ok = j.at("kernel_ok").get<bool>();
  return h;
}

} // namespace

bool FlowReport::all_pass() const {
  for (const auto& l : lemmas)
    if (!l.pass) return false;
  for (const auto& s : stages)
    if (!s.pass) return false;
  if (composite && !composite->pass) return false;
  return !lemmas.empty() || !stages.empty();
}

std::string to_json_string(const FlowReport& r, bool include_timing) {
  ordered_json j;
  j["schema_version"] = r.schema_version;
  j["verdict"] = r.verdict;
  j["scenario"] = scenario_json(r.scenario);

  const ReportConstants& c = r.constants;
  ordered_json cj;
  cj["dim_g"] = c.dim_g;
  cj["dim_k"] = c.dim_k;
  cj["dim_p"] = c.dim_p;
  cj["rank"] = c.rank;
  cj["dim_k_lambda"] = c.dim_k_lambda;
  cj["m_lambda"] = num(c.m_lambda);
  cj["b_lambda"] = num(c.b_lambda);
  cj["chamber_margin"] = num(c.chamber_margin);
  cj["compact_margin"] = num(c.compact_margin);
  cj["delta"] = num(c.delta);
  cj["flat_scale"] = num(c.flat_scale);
  cj["product_fiber_scale"] = num(c.product_fiber_scale);
  j["constants"] = cj;

  ordered_json lj = ordered_json::object();
  for (const auto& l : r.lemmas) {
    ordered_json e;
    e["pass"] = l.pass;
    e["worst"] = num(l.worst);
    e["tolerance"] = num(l.tolerance);
    e["samples"] = l.samples;
    e["note"] = l.note;
    lj[l.name] = e;
  }
  j["lemmas"] = lj;

  ordered_json sj = ordered_json::array();
  for (const auto& s : r.stages) {
    ordered_json e;
    e["name"] = s.name;
    e["family"] = s.family;
    e["steps"] = s.steps;
    e["samples"] = s.samples;
    e["pass"] = s.pass;
    e["hypotheses"] = hypotheses_json(s.hypotheses);
    e["primitive_zero_section"] = num(s.primitive_zero_section);
    e["pullback_residual"] = num(s.pullback_residual);
    e["moment_spread"] = num(s.moment_spread);
    e["zero_section_fix"] = num(s.zero_section_fix);
    sj.push_back(e);
  }
  j["stages"] = sj;

  if (r.composite) {
    const CompositeReport& m = *r.composite;
    ordered_json e;
    e["pass"] = m.pass;
    e["samples"] = m.samples;
    e["pullback_residual"] = num(m.pullback_residual);
    e["zero_section_fix"] = num(m.zero_section_fix);
    e["equivariance"] = num(m.equivariance);
    e["moment_spread"] = num(m.moment_spread);
    j["composite"] = e;
  } else {
    j["composite"] = nullptr;
  }

  if (include_timing) {
    ordered_json t;
    t["total_seconds"] = num(r.timing.total_seconds);
    t["lemma_seconds"] = num(r.timing.lemma_seconds);
    ordered_json st = ordered_json::array();
    for (double x : r.timing.stage_seconds) st.push_back(num(x));
    t["stage_seconds"] = st;
    t["composite_seconds"] = num(r.timing.composite_seconds);
    j["timing"] = t;
  }
  return j.dump(2) + "\n";
}

FlowReport from_json_string(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw DomainError(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    FlowReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion)
      throw DomainError("unsupported report schema version " + std::to_string(r.schema_version));
    r.verdict = j.at("verdict").get<std::string>();
    r.scenario = scenario_from(j.at("scenario"));

    const auto& cj = j.at("constants");
    ReportConstants& c = r.constants;
    c.dim_g = cj.at("dim_g").get<int>();
    c.dim_k = cj.at("dim_k").get<int>();
    c.dim_p = cj.at("dim_p").get<int>();
    c.rank = cj.at("rank").get<int>();
    c.dim_k_lambda = cj.at("dim_k_lambda").get<int>();
    c.m_lambda = get_num(cj.at("m_lambda"));
    c.b_lambda = get_num(cj.at("b_lambda"));
    c.chamber_margin = get_num(cj.at("chamber_margin"));
    c.compact_margin = get_num(cj.at("compact_margin"));
    c.delta = get_num(cj.at("delta"));
    c.flat_scale = get_num(cj.at("flat_scale"));
    c.product_fiber_scale = get_num(cj.at("product_fiber_scale"));

    for (const auto& [name, e] : j.at("lemmas").items()) {
      LemmaResult l;
      l.name = name;
      l.pass = e.at("pass").get<bool>();
      l.worst = get_num(e.at("worst"));
      l.tolerance = get_num(e.at("tolerance"));
      l.samples = e.at("samples").get<int>();
      l.note = e.at("note").get<std::string>();
      r.lemmas.push_back(l);
    }
    for (const auto& e : j.at("stages")) {
      StageReport s;
      s.name = e.at("name").get<std::string>();
      s.family = e.at("family").get<std::string>();
      s.steps = e.at("steps").get<int>();
      s.samples = e.at("samples").get<int>();
      s.pass = e.at("pass").get<bool>();
      s.hypotheses = hypotheses_from(e.at("hypotheses"));
      s.primitive_zero_section = get_num(e.at("primitive_zero_section"));
      s.pullback_residual = get_num(e.at("pullback_residual"));
      s.moment_spread = get_num(e.at("moment_spread"));
      s.zero_section_fix = get_num(e.at("zero_section_fix"));
      r.stages.push_back(s);
    }
    if (!j.at("composite").is_null()) {
      const auto& e = j.at("composite");
      CompositeReport m;
      m.pass = e.at("pass").get<bool>();
      m.samples = e.at("samples").get<int>();
      m.pullback_residual = get_num(e.at("pullback_residual"));
      m.zero_section_fix = get_num(e.at("zero_section_fix"));
      m.equivariance = get_num(e.at("equivariance"));
      m.moment_spread = get_num(e.at("moment_spread"));
      r.composite = m;
    }
    if (j.contains("timing")) {
      const auto& t = j.at("timing");
      r.timing.total_seconds = get_num(t.at("total_seconds"));
      r.timing.lemma_seconds = get_num(t.at("lemma_seconds"));
      for (const auto& x : t.at("stage_seconds")) r.timing.stage_seconds.push_back(get_num(x));
      r.timing.composite_seconds = get_num(t.at("composite_seconds"));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed report: ") + e.what());
  }
}

} // namespace hcorbit
