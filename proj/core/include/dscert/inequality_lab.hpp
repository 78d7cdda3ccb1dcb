#pragma once

#include <cstdint>
#include <vector>

#include "dscert/box_geometry.hpp"
#include "dscert/spin_types.hpp"

namespace dscert {

/// Box V with one boundary site y promoted to a spin variable. The sites of
/// dV \ {y} keep the frozen values; the bit of `frozen` at y is ignored.
/// With free_others the rest of the boundary is dropped instead of frozen.
struct AugmentedVolume {
  const BoxGeometry* box = nullptr;
  int adjoined_site = 0;  // boundary index of y
  BoundaryCondition frozen;
  bool free_others = false;
};

/// Covariance surplus of the zero-field measure over the measure under h,
/// free boundary: <s_u; s_v>^{h=0} - <s_u; s_v>^{h}. Nonnegative for every
/// field (the Ding-Song-Sun inequality); |V| <= 16.
double dss_margin(const BoxGeometry& g, double beta, const FieldAssignment& h, int u, int v);

/// <s_y> in the augmented volume under field h_y at the adjoined site.
double adjoined_magnetization(const AugmentedVolume& av, double beta, double h_y);

/// The field h* at y that balances the adjoined spin, |<s_y>| <= tol.
/// Found by bisection on [-2d*beta - 1, 2d*beta + 1]; <s_y> is strictly
/// increasing in h_y, which is asserted on the bracket.
double balancing_field(const AugmentedVolume& av, double beta, double tol);

/// | (<s_x>_{b} - <s_x>_{b^y}) - 2 <s_x; s_y>^{h*} |, where b is the frozen
/// boundary with sigma_y = +1 and b^y its flip. Solves for h* internally;
/// the residual contract is 10*tol.
double covariance_identity_residual(const AugmentedVolume& av, double beta, int x, double tol);

/// Conditional measures of the augmented volume given sigma_y = +-1.
/// At h* these coincide with the box measures under b and b^y, and
/// P(sigma_y = +1) = 1/2 within tol.
struct AugmentedConditionals {
  DistributionTable given_plus;
  DistributionTable given_minus;
  double prob_plus = 0.0;
};

AugmentedConditionals augmented_conditionals(const AugmentedVolume& av, double beta, double h_y);

// ---------------------------------------------------------------------------
// Randomized sweep of the covariance inequality.

struct DssTrial {
  std::uint64_t index = 0;
  int width = 1;
  int height = 1;
  double beta = 0.0;
  std::vector<double> field;
  int u = 0;
  int v = 0;
  bool u_equals_v = false;
  double margin = 0.0;
};

struct DssSweepConfig {
  std::uint64_t seed = 0;
  std::uint64_t trials = 1000;
  int max_extent = 3;
  bool zero_field = false;
  int workers = 1;
  double violation_threshold = -1e-12;
};

struct DssSweepReport {
  DssSweepConfig config;
  double min_margin = 0.0;
  std::uint64_t violation_count = 0;
  std::uint64_t u_equals_v_count = 0;
  double min_margin_u_equals_v = 0.0;  // 0 when no such trials
  std::vector<DssTrial> trials;        // full log, in index order
  double wall_seconds = 0.0;
};

/// Runs seeded random trials (box extents, beta, field, site pair all derived
/// deterministically from seed and trial index) and records every margin.
/// Trials are independent, so any worker count yields the same report.
DssSweepReport dss_sweep(const DssSweepConfig& cfg);

/// Recomputes a single trial bit-exactly from (seed, index).
DssTrial dss_replay(const DssSweepConfig& cfg, std::uint64_t index);

}  // namespace dscert
