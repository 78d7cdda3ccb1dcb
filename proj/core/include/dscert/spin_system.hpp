#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dscert/box_geometry.hpp"
#include "dscert/spin_types.hpp"

namespace dscert {

/// A finite +-1 spin system with unit ferromagnetic couplings:
///
///   weight(s) = exp{ beta * (sum_{(i,j) in edges} s_i s_j + sum_i c_i s_i)
///                    + sum_i h_i s_i }
///
/// c_i is the integer sum of frozen neighbor spins (it rides along with
/// beta like the couplings do), h_i a real external field. Both the box
/// measures and the augmented volumes of the inequality lab reduce to this.
class SpinSystem {
 public:
  SpinSystem(int spin_count, std::vector<std::pair<int, int>> edges,
             std::vector<int> frozen_field, std::vector<double> external_field);

  /// The measure q_V(.|b) of a box: spins are the interior sites, the
  /// boundary enters through the frozen field (dropped in free mode).
  static SpinSystem interior(const BoxGeometry& g, BoundaryCondition b,
                             BoundaryMode mode, const FieldAssignment* h);

  /// The box with one boundary site promoted to a spin variable. The new
  /// variable takes index volume(); it keeps its couplings into the box and
  /// to its frozen boundary neighbors, and carries the field adjoined_field.
  /// The bit of `frozen` at adjoined_site is ignored. In free mode the
  /// remaining boundary sites are dropped instead of frozen.
  static SpinSystem augmented(const BoxGeometry& g, BoundaryCondition frozen,
                              int adjoined_site, double adjoined_field,
                              BoundaryMode mode = BoundaryMode::kFixed);

  int spin_count() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& frozen_field() const { return frozen_field_; }
  const std::vector<double>& external_field() const { return external_field_; }
  bool field_free() const { return field_free_; }

  /// sum_edges s_i s_j + sum_i c_i s_i as an exact integer.
  int alignment(std::uint32_t state) const;
  /// Full exponent beta*alignment + sum h_i s_i.
  double exponent(std::uint32_t state, double beta) const;
  /// Upper bound on |alignment| over all states.
  int alignment_bound() const { return alignment_bound_; }

  /// System with all frozen fields negated. With h == 0 its measure is the
  /// global spin flip of this one.
  SpinSystem mirrored() const;

  /// True when h == 0 and the frozen field is lexicographically
  /// nonnegative (first nonzero entry positive, or all zero). Sweeping the
  /// mirrored system and negating magnetizations makes the pair of results
  /// for (c, -c) bit-exact mirrors of each other.
  bool mirror_canonical() const;

  // Precomputed per-site data for the Gray sweeps.
  std::uint32_t neighbor_mask(int i) const { return neighbor_mask_[i]; }
  int local_base(int i) const { return base_[i]; }  // c_i - degree_i

 private:
  int n_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> frozen_field_;
  std::vector<double> external_field_;
  std::vector<std::uint32_t> neighbor_mask_;
  std::vector<int> base_;  // c_i - deg_i, so that local field = 2*popcount(s & mask) + base
  int alignment_bound_ = 0;
  bool field_free_ = true;
};

struct MeasureSummary {
  double log_z = 0.0;
  std::vector<double> magnetization;
};

/// Exact log partition function and per-spin magnetizations by Gray-code
/// enumeration of all 2^n states (O(1) incremental energy updates, log-domain
/// safe for arbitrary beta).
MeasureSummary sweep_measure(const SpinSystem& sys, double beta);

/// Log partition function only.
double sweep_log_z(const SpinSystem& sys, double beta);

/// Covariance <s_u s_v> - <s_u><s_v>; the means are optionally returned.
double sweep_covariance(const SpinSystem& sys, double beta, int u, int v,
                        double* mean_u = nullptr, double* mean_v = nullptr);

/// Full probability table indexed by state bits.
std::vector<double> sweep_table(const SpinSystem& sys, double beta, double* log_z_out);

}  // namespace dscert
