#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dscert {

/// Cross-validation sweep: runs the monotone-coupling distance and the exact
/// transportation solver side by side over every boundary configuration and
/// flip site of every d=2 box up to max_volume sites, at each listed beta.
struct OracleSweepConfig {
  int max_volume = 6;  // tables are 2^|V|, keep small
  std::vector<double> betas = {0.1, 0.3, 0.5};
  int workers = 1;
};

struct OracleRow {
  std::string geometry_id;
  double beta = 0.0;
  int flip_site = 0;
  std::uint64_t patterns = 0;
  double max_delta = 0.0;
};

struct SingleSiteRow {
  int dimension = 0;
  double beta = 0.0;
  double box_value = 0.0;     // dependence coefficient on the 1^d box
  double direct_value = 0.0;  // single-site brute force
  double delta = 0.0;
};

struct OracleReport {
  int max_volume = 0;
  std::vector<double> betas;
  std::vector<OracleRow> rows;
  std::uint64_t comparisons = 0;
  double max_delta = 0.0;
  std::vector<SingleSiteRow> single_site;
  double single_site_max_delta = 0.0;
  double wall_seconds = 0.0;
};

OracleReport oracle_sweep(const OracleSweepConfig& cfg);

/// Dependence coefficient of the single-site box in dimension d against the
/// direct conditional-distribution maximization, over a beta grid.
OracleReport oracle_single_site(int dimension, const std::vector<double>& betas);

}  // namespace dscert
