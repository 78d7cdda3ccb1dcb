#pragma once

#include <vector>

#include "dscert/certifier.hpp"

namespace dscert {

struct ThresholdScanPoint {
  double beta = 0.0;
  double coefficient_sum = 0.0;
  bool holds = false;
};

struct BisectionOptions {
  double tolerance = 1e-6;
  double beta_max = 0.6;
  int grid_points = 24;  // >= 8
  CertifierOptions certifier;
};

/// Verified bracket around the threshold beta_V. The condition is checked
/// at finitely many beta, so the result is a bracket, never a point:
/// the condition holds at beta_lo and fails at beta_hi (when bounded).
struct BisectionResult {
  std::string geometry_id;
  double tolerance = 0.0;
  double beta_max = 0.0;

  bool unbounded = false;   // condition holds everywhere up to beta_max
  bool ambiguous = false;   // more than one sign change on the grid
  bool grid_monotone = true;

  double beta_lo = 0.0;  // condition verified to hold
  double beta_hi = 0.0;  // condition verified to fail (NaN when unbounded)
  double sum_at_lo = 0.0;
  double sum_at_hi = 0.0;

  // Grid bracket of the last sign change when ambiguous (NaN otherwise).
  double second_bracket_lo = 0.0;
  double second_bracket_hi = 0.0;

  std::vector<ThresholdScanPoint> grid;        // beta = 0 anchor plus the uniform scan
  std::vector<ThresholdScanPoint> iterations;  // bisection evaluations in order
  double wall_seconds = 0.0;
  double grid_seconds = 0.0;
  double bisect_seconds = 0.0;
};

/// Scans sum_k(beta) on a uniform grid over (0, beta_max] to locate a sign
/// change of sum_k - |V| (and to flag non-monotone data), then bisects the
/// first bracket to the requested tolerance.
BisectionResult bisect_threshold(const BoxGeometry& g, const BisectionOptions& opts = {});

}  // namespace dscert
