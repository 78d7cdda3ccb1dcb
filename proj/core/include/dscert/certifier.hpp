#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dscert/box_geometry.hpp"
#include "dscert/spin_types.hpp"

namespace dscert {

enum class CoefficientMode {
  kFast,    // FKG monotone-coupling distance from magnetization gaps
  kOracle,  // explicit tables + exact transportation simplex
};

struct CertifierOptions {
  CoefficientMode mode = CoefficientMode::kFast;
  bool use_symmetry = true;
  int workers = 1;                // <= 0 means hardware concurrency
  double epsilon_guard = 1e-9;    // strictness margin for the verdict
  // Exploration shortcut: score only the extremal (all-equal) boundary
  // configuration instead of the full maximization. Never certifying; the
  // report is labeled accordingly.
  bool extremal_only = false;
};

/// k_{V,y} = (1/2) max over boundary configurations of the Kantorovich
/// distance between the conditional measures with sigma_y = +1 and -1.
struct DependenceCoefficient {
  int boundary_site = 0;
  double value = 0.0;
  BoundaryCondition argmax_boundary;   // maximizing boundary, sigma_y = +1
  std::string method;                  // "monotone" or "exact-ot"
  std::uint64_t evaluated_patterns = 0;
  std::uint64_t raw_patterns = 0;      // 2^(|dV|-1)
};

struct EnumerationStats {
  std::uint64_t evaluated = 0;
  std::uint64_t skipped_by_symmetry = 0;
  std::uint64_t raw_total = 0;
};

/// Result of checking sum_y k_{V,y} < |V| at one beta.
struct CertificateReport {
  std::string geometry_id;
  double beta = 0.0;
  std::string mode;
  bool symmetry = true;
  double epsilon_guard = 1e-9;
  int volume = 0;
  bool certifying = true;  // false for the extremal-only heuristic
  std::vector<DependenceCoefficient> coefficients;  // one per boundary site
  double coefficient_sum = 0.0;
  bool holds = false;
  EnumerationStats enumeration;
  double wall_seconds = 0.0;  // excluded from deterministic serialization
};

DependenceCoefficient dependence_coefficient(const BoxGeometry& g, double beta,
                                             int boundary_site,
                                             const CertifierOptions& opts = {});

/// Evaluates every k_{V,y} (reusing box symmetries across boundary sites)
/// and renders the strict-inequality verdict. Deterministic for any worker
/// count: per-orbit maxima are reduced in canonical orbit order.
CertificateReport certify_box(const BoxGeometry& g, double beta,
                              const CertifierOptions& opts = {});

/// Single-site (Dobrushin) specialization: the conditional distribution of
/// one spin given its 2d neighbors, maximized over the 2^(2d-1)
/// configurations of the non-flipped neighbors.
struct SingleSiteResult {
  double coefficient = 0.0;   // k_{x,y}
  double sum = 0.0;           // 2d * k
  bool condition_holds = false;
};

SingleSiteResult dobrushin_single_site(int dimension, double beta);

}  // namespace dscert
