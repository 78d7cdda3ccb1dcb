#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "dscert/bisection.hpp"

using namespace dscert;

TEST_CASE("single-site threshold brackets the closed-form root") {
  const BoxGeometry g = build_box(2, {1, 1});
  BisectionOptions opts;
  opts.tolerance = 1e-6;
  const BisectionResult r = bisect_threshold(g, opts);

  const double closed = 0.5 * std::atanh(0.5);  // 0.27465307216702745
  CHECK(!r.unbounded);
  CHECK(!r.ambiguous);
  CHECK(r.grid_monotone);
  CHECK(r.beta_hi - r.beta_lo <= 1e-6);
  CHECK(r.beta_lo <= closed + 1e-9);
  CHECK(r.beta_hi >= closed - 1e-9);

  // The bracket endpoints carry verified verdicts.
  CHECK(certify_box(g, r.beta_lo).holds);
  CHECK(!certify_box(g, r.beta_hi).holds);
  CHECK(r.sum_at_lo < 1.0);
  CHECK(r.sum_at_hi >= 1.0 - 1e-9);
}

TEST_CASE("d = 1 single site never fails the condition") {
  const BoxGeometry g = build_box(1, {1});
  BisectionOptions opts;
  opts.beta_max = 5.0;
  opts.tolerance = 1e-4;
  const BisectionResult r = bisect_threshold(g, opts);
  CHECK(r.unbounded);
  CHECK(r.beta_lo == 5.0);
  CHECK(std::isnan(r.beta_hi));
  CHECK(r.sum_at_lo < 1.0);  // tanh(2*beta) stays below 1
}

TEST_CASE("larger boxes certify strictly past the single-site threshold") {
  BisectionOptions opts;
  opts.tolerance = 1e-4;
  const BisectionResult small = bisect_threshold(build_box(2, {1, 1}), opts);
  const BisectionResult large = bisect_threshold(build_box(2, {2, 2}), opts);
  CHECK(!large.unbounded);
  CHECK(large.beta_lo > small.beta_hi);
}

TEST_CASE("grid rows carry consistent verdicts") {
  const BoxGeometry g = build_box(2, {1, 1});
  BisectionOptions opts;
  opts.tolerance = 1e-3;
  const BisectionResult r = bisect_threshold(g, opts);
  REQUIRE(!r.grid.empty());
  CHECK(r.grid.front().beta == 0.0);
  CHECK(r.grid.front().holds);
  for (const ThresholdScanPoint& p : r.grid)
    CHECK(p.holds == (p.coefficient_sum < 1.0 - 1e-9));
  for (std::size_t i = 0; i + 1 < r.grid.size(); ++i) CHECK(r.grid[i].beta < r.grid[i + 1].beta);
}

TEST_CASE("option validation") {
  const BoxGeometry g = build_box(2, {1, 1});
  BisectionOptions bad;
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(bisect_threshold(g, bad), std::invalid_argument);
  bad = {};
  bad.grid_points = 4;
  CHECK_THROWS_AS(bisect_threshold(g, bad), std::invalid_argument);
}
