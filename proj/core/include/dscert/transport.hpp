#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dscert/spin_types.hpp"

namespace dscert {

/// Weighted Hamming metric on spin configurations:
///   rho(s', s'') = sum_x w_x * [s'_x != s''_x].
/// The default weight is 2 per site, i.e. rho = sum_x |s'_x - s''_x|,
/// under which all costs are even integers.
struct MetricSpec {
  std::vector<double> site_weights;

  static MetricSpec defaults(int volume) { return {std::vector<double>(volume, 2.0)}; }
  int size() const { return static_cast<int>(site_weights.size()); }
};

struct CouplingEntry {
  std::uint32_t from;  // configuration index in mu
  std::uint32_t to;    // configuration index in nu
  double mass;
};

/// Sparse joint distribution witnessing a transport cost; row marginals
/// reproduce mu, column marginals nu (within 1e-10).
struct CouplingPlan {
  std::vector<CouplingEntry> entries;

  double total_mass() const;
};

struct TransportSolution {
  double distance = 0.0;
  CouplingPlan plan;
  std::uint64_t pivots = 0;
};

/// Exact Kantorovich distance between two distributions over the same
/// configuration space, solved by the transportation simplex on the support
/// graph. With integer costs the optimality test is exact, so the returned
/// basis certifies the optimum combinatorially. Support sizes are capped at
/// 2^12 atoms per side.
TransportSolution kantorovich_exact(const DistributionTable& mu, const DistributionTable& nu,
                                    const MetricSpec& metric);

/// Transport distance of a stochastically ordered pair under the default
/// metric, computed from the per-site magnetization gap (higher minus
/// lower): the monotone coupling gives sum_x gap_x as an upper bound and
/// the 1-Lipschitz function sum_x s_x matches it from below. Entries in
/// (-1e-9, 0) are clipped as roundoff; anything below -1e-9 signals a
/// non-ordered pair and throws std::invalid_argument.
double kantorovich_monotone(std::span<const double> magnetization_gap);

/// (1/2) sum_i |mu_i - nu_i|; equals the Kantorovich distance under the
/// discrete metric rho(x, y) = 1_{x != y}.
double variational_distance(const DistributionTable& mu, const DistributionTable& nu);

namespace transport_detail {

struct DenseFlow {
  int from;
  int to;
  double mass;
};

struct DenseSolution {
  double cost = 0.0;
  std::vector<DenseFlow> flows;
  std::uint64_t pivots = 0;
};

/// Balanced dense transportation problem min sum f_ij c_ij with given row
/// and column marginals (all positive, equal totals). Exposed so tests can
/// cross-check the solver against closed forms under other cost matrices.
DenseSolution solve_transport(const std::vector<double>& supply, const std::vector<double>& demand,
                              const std::vector<double>& cost_row_major);

}  // namespace transport_detail

}  // namespace dscert
