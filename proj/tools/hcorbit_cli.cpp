#include "hcorbit/pipeline.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

using namespace hcorbit;

namespace {

struct Overrides {
  std::string config;
  std::string family;
  int p = 0, q = 0, n = 0;
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
  std::optional<double> delta_mult;
  std::optional<int> samples;
  std::optional<double> eps;
  std::vector<std::string> set;
  std::string out;
  bool json = false;
};

void add_scenario_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Scenario file (key = value lines)");
  cmd->add_option("--family", o.family, "su or sp");
  cmd->add_option("--p", o.p, "p of su(p,q)");
  cmd->add_option("--q", o.q, "q of su(p,q)");
  cmd->add_option("--n", o.n, "n of sp(2n,R)");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--steps", o.steps, "RK4 steps per stage");
  cmd->add_option("--delta-mult", o.delta_mult, "delta as a multiple of b_lambda");
  cmd->add_option("--samples", o.samples, "Composite pullback samples");
  cmd->add_option("--eps", o.eps, "Finite-difference step");
  cmd->add_option("--set", o.set, "Extra key=value override (repeatable)");
  cmd->add_flag("--json", o.json, "Print the JSON document to stdout");
}

Scenario resolve(const Overrides& o) {
  Scenario s = o.config.empty() ? Scenario{} : load_scenario(o.config);
  if (!o.family.empty()) s.family = o.family;
  if (o.p) s.p = o.p;
  if (o.q) s.q = o.q;
  if (o.n) s.n = o.n;
  if (o.seed) s.seed = *o.seed;
  if (o.steps) s.steps = *o.steps;
  if (o.delta_mult) {
    s.delta_mult = *o.delta_mult;
    s.delta.reset();
  }
  if (o.samples) s.samples = *o.samples;
  if (o.eps) s.eps = *o.eps;
  for (const std::string& kv : o.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw DomainError("--set expects key=value, got '" + kv + "'");
    s.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!o.out.empty()) s.out = o.out;
  return s;
}

void print_summary(const FlowReport& r) {
  std::cout << std::setprecision(4);
  const ReportConstants& c = r.constants;
  std::cout << "constants: m_lambda " << c.m_lambda << "  b_lambda " << c.b_lambda << "  delta " << c.delta
            << "  chamber margin " << c.chamber_margin << "  dim k_lambda " << c.dim_k_lambda << "\n";
  for (const LemmaResult& l : r.lemmas)
    std::cout << "  [" << (l.pass ? "pass" : "FAIL") << "] " << std::left << std::setw(24) << l.name << std::right
              << " worst " << std::setw(11) << l.worst << "  (" << l.samples << " samples) " << l.note << "\n";
  for (const StageReport& s : r.stages) {
    const HypothesisReport& h = s.hypotheses;
    std::cout << "  [" << (s.pass ? "pass" : "FAIL") << "] stage " << s.name << ": pullback " << s.pullback_residual
              << ", moment spread " << s.moment_spread << ", zero section " << s.zero_section_fix << "\n"
              << "         hypotheses: stokes " << h.stokes_max_rel_error << ", orthogonality "
              << h.orthogonality_residual << ", d " << h.fitted_d << " vs bound " << h.bound_d << ", gauge "
              << h.gauge_max << ", kernel " << h.kernel_residual << (h.pass() ? "" : "  (FAILED)") << "\n";
  }
  if (r.composite) {
    const CompositeReport& m = *r.composite;
    std::cout << "  [" << (m.pass ? "pass" : "FAIL") << "] composite: pullback " << m.pullback_residual
              << ", zero section " << m.zero_section_fix << ", equivariance " << m.equivariance
              << ", moment spread " << m.moment_spread << " (" << m.samples << " samples)\n";
  }
  std::cout << "verdict: " << r.verdict << "  (" << r.timing.total_seconds << " s)\n";
}

int emit(const FlowReport& r, const Overrides& o) {
  const std::string doc = to_json_string(r);
  if (!r.scenario.out.empty()) {
    std::filesystem::create_directories(r.scenario.out);
    const auto path = std::filesystem::path(r.scenario.out) / "report.json";
    std::ofstream(path) << doc;
    std::cerr << "wrote " << path.string() << "\n";
  }
  if (o.json) std::cout << doc;
  else print_summary(r);
  return r.verdict == "pass" ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Holomorphic coadjoint orbit verifier"};
  app.require_subcommand(1);
  Overrides o;

  auto* inspect = app.add_subcommand("inspect", "Dimensions, roots, z0 and chamber constants");
  add_scenario_flags(inspect, o);
  auto* lemmas = app.add_subcommand("lemmas", "Run the lemma suite");
  add_scenario_flags(lemmas, o);
  lemmas->add_option("--out", o.out, "Directory for report.json");
  auto* theorem = app.add_subcommand("theorem", "Run the three-stage flow pipeline");
  add_scenario_flags(theorem, o);
  theorem->add_option("--out", o.out, "Directory for report.json");

  CLI11_PARSE(app, argc, argv);

  try {
    const Scenario s = resolve(o);
    if (inspect->parsed()) {
      std::cout << inspect_model(s, o.json);
      return 0;
    }
    if (lemmas->parsed()) return emit(run_lemma_suite(s), o);
    return emit(run_theorem_pipeline(s), o);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
