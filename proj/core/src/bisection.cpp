#include "dscert/bisection.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dscert {

BisectionResult bisect_threshold(const BoxGeometry& g, const BisectionOptions& opts) {
  if (!(opts.tolerance > 0.0)) throw std::invalid_argument("bisect_threshold: tolerance must be > 0");
  if (!(opts.beta_max > 0.0)) throw std::invalid_argument("bisect_threshold: beta_max must be > 0");
  if (opts.grid_points < 8) throw std::invalid_argument("bisect_threshold: need at least 8 grid points");

  const auto start = std::chrono::steady_clock::now();
  const double nan = std::numeric_limits<double>::quiet_NaN();

  BisectionResult out;
  out.geometry_id = g.id();
  out.tolerance = opts.tolerance;
  out.beta_max = opts.beta_max;
  out.beta_hi = nan;
  out.sum_at_hi = nan;
  out.second_bracket_lo = nan;
  out.second_bracket_hi = nan;

  auto evaluate = [&](double beta) {
    const CertificateReport rep = certify_box(g, beta, opts.certifier);
    return ThresholdScanPoint{beta, rep.coefficient_sum, rep.holds};
  };

  // beta = 0 anchor (the condition always holds there), then the uniform
  // grid over (0, beta_max].
  out.grid.push_back(evaluate(0.0));
  for (int i = 1; i <= opts.grid_points; ++i)
    out.grid.push_back(evaluate(opts.beta_max * i / opts.grid_points));
  out.grid_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  for (std::size_t i = 0; i + 1 < out.grid.size(); ++i)
    if (out.grid[i + 1].coefficient_sum < out.grid[i].coefficient_sum - 1e-12)
      out.grid_monotone = false;

  std::vector<std::size_t> crossings;
  for (std::size_t i = 0; i + 1 < out.grid.size(); ++i)
    if (out.grid[i].holds && !out.grid[i + 1].holds) crossings.push_back(i);

  if (crossings.empty()) {
    if (!out.grid.back().holds)
      throw std::runtime_error("bisect_threshold: condition fails at every grid point above 0");
    out.unbounded = true;
    out.beta_lo = out.grid.back().beta;
    out.sum_at_lo = out.grid.back().coefficient_sum;
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  }

  out.ambiguous = crossings.size() > 1;
  if (out.ambiguous) {
    out.second_bracket_lo = out.grid[crossings.back()].beta;
    out.second_bracket_hi = out.grid[crossings.back() + 1].beta;
  }

  ThresholdScanPoint lo = out.grid[crossings.front()];
  ThresholdScanPoint hi = out.grid[crossings.front() + 1];
  const auto bisect_start = std::chrono::steady_clock::now();
  while (hi.beta - lo.beta > opts.tolerance) {
    const ThresholdScanPoint mid = evaluate(0.5 * (lo.beta + hi.beta));
    out.iterations.push_back(mid);
    (mid.holds ? lo : hi) = mid;
  }
  out.bisect_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - bisect_start).count();

  out.beta_lo = lo.beta;
  out.beta_hi = hi.beta;
  out.sum_at_lo = lo.coefficient_sum;
  out.sum_at_hi = hi.coefficient_sum;
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace dscert
