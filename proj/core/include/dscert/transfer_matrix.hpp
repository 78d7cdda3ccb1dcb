#pragma once

#include <vector>

#include "dscert/box_geometry.hpp"
#include "dscert/spin_types.hpp"

namespace dscert {

struct TransferResult {
  double log_z = 0.0;
  std::vector<double> magnetization;
};

/// Exact column transfer-matrix evaluation for d = 2 boxes. The state space
/// is a column along the shorter axis (extent <= 20); the sweep runs along
/// the longer axis, so tall thin boxes cost O(W * H * 2^H). Fixed boundary
/// spins enter as per-column field terms; vectors are rescaled every column,
/// so arbitrary beta is safe.
TransferResult transfer_measure(const BoxGeometry& g, double beta, const FieldAssignment& h,
                                BoundaryCondition b, BoundaryMode mode = BoundaryMode::kFixed);

/// log Z only; streams the forward sweep without storing column vectors.
double transfer_log_z(const BoxGeometry& g, double beta, const FieldAssignment& h,
                      BoundaryCondition b, BoundaryMode mode = BoundaryMode::kFixed);

/// Largest column height accepted by the transfer path.
inline constexpr int kMaxTransferHeight = 20;

}  // namespace dscert
