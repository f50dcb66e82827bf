#pragma once

#include "hcorbit/roots.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hcorbit {

struct Tolerances {
  double structure = 1e-10;
  double z0 = 1e-10;
  double chi = 1e-8;
  double lemma_slack = 1e-10;
  double flat_identity = 1e-10;
  double moment_identity = 1e-6;
  double stage_pullback = 1e-4;
  double composite_pullback = 1e-3;
  double zero_section = 1e-6;
  double equivariance = 1e-6;
  double moment_spread = 1e-5;
  double properness_slack = 0.05;
  double stokes = 1e-4;
  double orthogonality = 1e-9;
  double gauge = 1e-10;

  /// Names accepted as `tolerances.<name>`.
  static const std::vector<std::string>& names();
  double& at(const std::string& name);
  double at(const std::string& name) const;
};

/// One verification run. Loaded from a flat `key = value` file; CLI flags
/// override individual keys.
struct Scenario {
  std::string family = "su"; // su | sp
  int p = 1;
  int q = 1;
  int n = 1;
  std::vector<double> lambda;      // torus coordinates; empty means lambda0
  std::vector<double> lambda_diag; // alternative: diagonal entries of H_lambda
  double delta_mult = 1.5;
  std::optional<double> delta;     // absolute delta, overrides delta_mult
  int steps = 200;
  int samples = 50;        // composite pullback samples
  int flow_samples = 8;    // per-stage pullback samples
  int lemma_samples = 1000;
  double eps = 1e-4;
  int stencil = 2;
  std::uint64_t seed = 1;
  std::string out;
  Tolerances tolerances;

  AlgebraSpec algebra() const;
  /// The chamber weight of the scenario (lambda0 when neither lambda key is set).
  ChamberWeight weight(const MatrixLieAlgebra& g, const RootDatum& datum) const;

  /// Sets one key from its text value. Throws DomainError on unknown keys or
  /// malformed values.
  void set(const std::string& key, const std::string& value);
  /// Throws DomainError unless delta_mult > 1, steps >= 10 and the counts are positive.
  void validate() const;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string to_config_text(const Scenario& s);

} // namespace hcorbit
