#pragma once

#include "hcorbit/report.hpp"

#include <memory>
#include <string>

namespace hcorbit {

/// Algebra, root datum and weight of a scenario, heap-pinned so that models
/// may keep pointers into it.
struct ScenarioContext {
  MatrixLieAlgebra g;
  RootDatum datum;
  ChamberWeight weight;

  /// Throws DomainError for bad parameters or a weight outside the chamber.
  static std::unique_ptr<ScenarioContext> build(const Scenario& s);
};

/// Independent stream seed for sub-check `index`.
std::uint64_t derive_seed(std::uint64_t seed, int index);

// Individual lemma checks. Each returns the worst residual (or worst slack
// for inequalities) over its samples.

LemmaResult check_structure(const MatrixLieAlgebra& g, double tol);
LemmaResult check_z0(const MatrixLieAlgebra& g, const RootDatum& datum, double tol);
LemmaResult check_chi_spectrum(const MatrixLieAlgebra& g, int samples, std::uint64_t seed, double tol);
/// <Phi_{Gamma_0^* Omega}(Z) - lambda0, z0> >= |Z|^2 / 2.
LemmaResult check_hermitian_properness(const OrbitModel& model0, int samples, std::uint64_t seed, double slack);
/// <Phi_{Omega_p}(Z), z0> = |Z|^2 for the displayed formula (normalized moment / flat_scale).
LemmaResult check_flat_moment(const OrbitModel& model0, int samples, std::uint64_t seed, double tol);
LemmaResult check_bracket_inequality(const MatrixLieAlgebra& g, const RootDatum& datum, int samples, std::uint64_t seed,
                          double slack);
/// Min nondegeneracy margin of the segment over 21 t-values x `points` random points.
LemmaResult check_segment_nondegeneracy(const OrbitModel& model, double delta, int points, std::uint64_t seed);
/// Max deviation of the segment from the affine interpolation of its endpoints.
LemmaResult check_segment_affinity(const OrbitModel& model, double delta, int points, std::uint64_t seed);
/// d<Phi, X> against i(X_M) Omega for the pullback, product, delta, segment and
/// hermitian pairs.
LemmaResult check_moment_identities(const OrbitModel& model, const OrbitModel& model0, double delta, int points,
                                    std::uint64_t seed, double tol);

/// Sets `constants` for the scenario weight; delta from the scenario.
ReportConstants compute_constants(const ScenarioContext& ctx, const Scenario& s);

/// Lemma suite. Throws DomainError when lambda is outside the chamber.
FlowReport run_lemma_suite(const Scenario& s);

/// Flow stage of the pipeline, certified on `samples`.
StageReport run_stage(const std::string& name, const FormFamily& family, const Scenario& s, std::uint64_t seed);

/// Stage maps on the lambda0 model extended by the identity on K.lambda.
PointMap extend_by_identity(const OrbitModel& model0, PointMap fiber_map);

/// Three-stage composite. Throws DomainError before flowing when delta <= b_lambda.
FlowReport run_theorem_pipeline(const Scenario& s);

/// Dimensions, roots, z0 and chamber constants; JSON when `as_json`.
std::string inspect_model(const Scenario& s, bool as_json);

} // namespace hcorbit
