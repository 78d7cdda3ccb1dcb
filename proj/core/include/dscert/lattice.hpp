#pragma once

#include <vector>

#include "dscert/box_geometry.hpp"
#include "dscert/spin_types.hpp"

namespace dscert {

enum class Method {
  kAuto,      // naive when the volume permits, otherwise transfer matrix
  kNaive,     // Gray-code enumeration, any dimension, |V| <= 24
  kTransfer,  // column transfer matrix, d = 2, min extent <= 20
};

/// Ising energy H_V(sigma|b) = -sum_{x~y in V} s_x s_y - sum_{cross} s_x b_y.
/// Exact integer-valued. In free mode the crossing sum is dropped.
double energy(const BoxGeometry& g, SpinConfiguration s, BoundaryCondition b,
              BoundaryMode mode = BoundaryMode::kFixed);

/// log Z(V, beta, b) for the weight exp{-beta*H + sum_x h_x s_x};
/// safe against overflow for beta*|V| up to 1e3 and beyond.
double log_partition_function(const BoxGeometry& g, double beta, const FieldAssignment& h,
                              BoundaryCondition b, BoundaryMode mode = BoundaryMode::kFixed,
                              Method method = Method::kAuto);

/// Normalized probability table over all 2^|V| configurations (|V| <= 20).
DistributionTable distribution_table(const BoxGeometry& g, double beta, const FieldAssignment& h,
                                     BoundaryCondition b, BoundaryMode mode = BoundaryMode::kFixed);

/// Per-site expectations <s_x>. With h == 0, magnetizations(b) equals
/// -magnetizations(complement(b)) bit-exactly.
std::vector<double> magnetizations(const BoxGeometry& g, double beta, const FieldAssignment& h,
                                   BoundaryCondition b, BoundaryMode mode = BoundaryMode::kFixed,
                                   Method method = Method::kAuto);

/// <s_u; s_v> = <s_u s_v> - <s_u><s_v> over interior sites u, v.
double covariance(const BoxGeometry& g, double beta, const FieldAssignment& h,
                  BoundaryCondition b, int u, int v,
                  BoundaryMode mode = BoundaryMode::kFixed);

}  // namespace dscert
