#include "dscert/lattice.hpp"

#include <cmath>
#include <stdexcept>

#include "dscert/spin_system.hpp"
#include "dscert/transfer_matrix.hpp"

namespace dscert {

namespace {

void validate_inputs(const BoxGeometry& g, BoundaryCondition b, const FieldAssignment* h) {
  if (!b.fits(g.boundary_size()))
    throw std::invalid_argument("lattice: boundary bits beyond |dV|");
  if (h != nullptr && !h->values.empty() && h->size() != g.volume())
    throw std::invalid_argument("lattice: field length must equal |V|");
  if (h != nullptr)
    for (double x : h->values)
      if (!std::isfinite(x)) throw std::invalid_argument("lattice: field entries must be finite");
}

bool transfer_applicable(const BoxGeometry& g) {
  if (g.dimension() != 2) return false;
  return std::min(g.extents()[0], g.extents()[1]) <= kMaxTransferHeight;
}

// Sign of the first nonzero crossing-field entry; +1 orientation is the
// mirror-canonical one (matching SpinSystem::mirror_canonical).
bool boundary_field_canonical(const BoxGeometry& g, BoundaryCondition b, BoundaryMode mode) {
  if (mode == BoundaryMode::kFree) return true;
  for (int i = 0; i < g.volume(); ++i) {
    int c = 0;
    for (int y : g.crossing_neighbors(i)) c += b.spin(y);
    if (c > 0) return true;
    if (c < 0) return false;
  }
  return true;
}

}  // namespace

double energy(const BoxGeometry& g, SpinConfiguration s, BoundaryCondition b, BoundaryMode mode) {
  validate_inputs(g, b, nullptr);
  if (g.volume() > 32)
    throw std::invalid_argument("energy: volume exceeds the packed spin word");
  if (g.volume() < 32 && (s.bits >> g.volume()) != 0)
    throw std::invalid_argument("energy: spin bits beyond |V|");
  long long sum = 0;
  for (const Edge& e : g.interior_edges()) sum += s.spin(e.a) * s.spin(e.b);
  if (mode == BoundaryMode::kFixed)
    for (const CrossingEdge& e : g.crossing_edges()) sum += s.spin(e.interior) * b.spin(e.boundary);
  return static_cast<double>(-sum);
}

double log_partition_function(const BoxGeometry& g, double beta, const FieldAssignment& h,
                              BoundaryCondition b, BoundaryMode mode, Method method) {
  validate_inputs(g, b, &h);
  if (beta < 0.0) throw std::invalid_argument("log_partition_function: beta must be >= 0");
  if (method == Method::kAuto)
    method = (g.volume() <= kMaxEnumerationVolume) ? Method::kNaive : Method::kTransfer;
  if (method == Method::kNaive) {
    if (g.volume() > kMaxEnumerationVolume)
      throw std::invalid_argument("log_partition_function: volume exceeds the naive limit");
    return sweep_log_z(SpinSystem::interior(g, b, mode, &h), beta);
  }
  return transfer_log_z(g, beta, h, b, mode);
}

DistributionTable distribution_table(const BoxGeometry& g, double beta, const FieldAssignment& h,
                                     BoundaryCondition b, BoundaryMode mode) {
  validate_inputs(g, b, &h);
  if (beta < 0.0) throw std::invalid_argument("distribution_table: beta must be >= 0");
  if (g.volume() > kMaxTableVolume)
    throw std::invalid_argument("distribution_table: volume exceeds the table limit of 20 sites");

  SpinSystem sys = SpinSystem::interior(g, b, mode, &h);
  DistributionTable table;
  if (sys.mirror_canonical()) {
    table.probabilities = sweep_table(sys, beta, &table.log_z);
  } else {
    // Evaluate the mirror and map state s to its complement, so the tables
    // for a boundary and its flip are exact mirror images.
    SpinSystem m = sys.mirrored();
    std::vector<double> p = sweep_table(m, beta, &table.log_z);
    const std::uint32_t mask = (g.volume() == 32) ? ~0u : ((1u << g.volume()) - 1u);
    table.probabilities.resize(p.size());
    for (std::uint32_t s = 0; s < p.size(); ++s) table.probabilities[s] = p[(~s) & mask];
  }
  return table;
}

std::vector<double> magnetizations(const BoxGeometry& g, double beta, const FieldAssignment& h,
                                   BoundaryCondition b, BoundaryMode mode, Method method) {
  validate_inputs(g, b, &h);
  if (beta < 0.0) throw std::invalid_argument("magnetizations: beta must be >= 0");
  if (method == Method::kAuto)
    method = (g.volume() <= kMaxEnumerationVolume) ? Method::kNaive : Method::kTransfer;

  if (method == Method::kNaive) {
    if (g.volume() > kMaxEnumerationVolume)
      throw std::invalid_argument("magnetizations: volume exceeds the naive limit");
    return sweep_measure(SpinSystem::interior(g, b, mode, &h), beta).magnetization;
  }

  if (g.dimension() != 2)
    throw std::invalid_argument("magnetizations: transfer path requires d = 2");
  if (!transfer_applicable(g))
    throw std::invalid_argument("magnetizations: transfer path requires min extent <= 20");

  // Mirror canonicalization, matching the naive kernel: with h == 0 the
  // results for a boundary and its complement are exact negations.
  if ((h.is_zero() || h.values.empty()) && !boundary_field_canonical(g, b, mode)) {
    std::vector<double> m =
        transfer_measure(g, beta, h, b.complemented(g.boundary_size()), mode).magnetization;
    for (double& x : m) x = -x;
    return m;
  }
  return transfer_measure(g, beta, h, b, mode).magnetization;
}

double covariance(const BoxGeometry& g, double beta, const FieldAssignment& h,
                  BoundaryCondition b, int u, int v, BoundaryMode mode) {
  validate_inputs(g, b, &h);
  if (u < 0 || u >= g.volume() || v < 0 || v >= g.volume())
    throw std::invalid_argument("covariance: site not in volume");
  if (g.volume() > kMaxEnumerationVolume)
    throw std::invalid_argument("covariance: volume exceeds the naive limit");
  return sweep_covariance(SpinSystem::interior(g, b, mode, &h), beta, u, v);
}

}  // namespace dscert
