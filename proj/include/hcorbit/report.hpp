#pragma once

#include "hcorbit/moser.hpp"
#include "hcorbit/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hcorbit {

inline constexpr int kReportSchemaVersion = 1;

struct LemmaResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;     // worst residual, or worst slack for inequalities
  double tolerance = 0.0;
  int samples = 0;
  std::string note;
};

struct ReportConstants {
  int dim_g = 0;
  int dim_k = 0;
  int dim_p = 0;
  int rank = 0;
  int dim_k_lambda = 0;
  double m_lambda = 0.0;
  double b_lambda = 0.0;
  double chamber_margin = 0.0;
  double compact_margin = 0.0;
  double delta = 0.0;
  double flat_scale = 0.0;
  double product_fiber_scale = 0.0;
};

struct StageReport {
  std::string name;
  std::string family;
  int steps = 0;
  HypothesisReport hypotheses;
  double primitive_zero_section = 0.0;
  double pullback_residual = 0.0;
  double moment_spread = 0.0;
  double zero_section_fix = 0.0;
  int samples = 0;
  bool pass = false;
};

struct CompositeReport {
  double pullback_residual = 0.0;
  double zero_section_fix = 0.0;
  double equivariance = 0.0;
  double moment_spread = 0.0;
  int samples = 0;
  bool pass = false;
};

struct ReportTiming {
  double total_seconds = 0.0;
  double lemma_seconds = 0.0;
  std::vector<double> stage_seconds;
  double composite_seconds = 0.0;
};

struct FlowReport {
  int schema_version = kReportSchemaVersion;
  std::string verdict = "fail";
  Scenario scenario;
  ReportConstants constants;
  std::vector<LemmaResult> lemmas;
  std::vector<StageReport> stages;
  std::optional<CompositeReport> composite;
  ReportTiming timing;

  /// pass iff every lemma, stage and the composite (if present) pass.
  bool all_pass() const;
  void update_verdict() { verdict = all_pass() ? "pass" : "fail"; }
};

/// Pretty-printed JSON. Non-finite numbers are written as the strings
/// "inf", "-inf" and "nan".
std::string to_json_string(const FlowReport& r, bool include_timing = true);
/// Throws DomainError on malformed documents or schema mismatch.
FlowReport from_json_string(const std::string& text);

} // namespace hcorbit
