#include <cmath>
#include <random>

#include "doctest.h"
#include "dscert/lattice.hpp"
#include "dscert/spin_system.hpp"
#include "oracles.hpp"

using namespace dscert;

namespace {

const FieldAssignment kNoField;

BoundaryCondition random_boundary(std::mt19937_64& rng, int n) {
  return BoundaryCondition{rng() & ((n == 64) ? ~0ull : ((1ull << n) - 1))};
}

}  // namespace

TEST_CASE("energy matches hand counts on tiny boxes") {
  const BoxGeometry g11 = build_box(2, {1, 1});
  CHECK(energy(g11, {1u}, all_plus_boundary(4)) == -4.0);
  // one boundary spin down: 3 aligned - 1 anti = 2 -> energy -2
  CHECK(energy(g11, {1u}, all_plus_boundary(4).flipped(3)) == -2.0);

  const BoxGeometry g21 = build_box(2, {2, 1});
  REQUIRE(g21.boundary_size() == 6);
  CHECK(energy(g21, {3u}, all_plus_boundary(6)) == -7.0);  // 1 interior + 6 crossing edges
  CHECK(energy(g21, {3u}, all_plus_boundary(6), BoundaryMode::kFree) == -1.0);
}

TEST_CASE("energy agrees with the coordinate-based oracle") {
  std::mt19937_64 rng(11);
  for (auto [w, h] : {std::pair{2, 2}, {3, 2}, {3, 3}, {1, 5}}) {
    const BoxGeometry g = build_box(2, {w, h});
    const oracle::Box2D ob = oracle::make_box(w, h);
    for (int rep = 0; rep < 25; ++rep) {
      const SpinConfiguration s{static_cast<std::uint32_t>(rng()) & ((1u << g.volume()) - 1)};
      const BoundaryCondition b = random_boundary(rng, g.boundary_size());
      CHECK(energy(g, s, b) == oracle::energy(ob, s.bits, b.word64(), false));
      CHECK(energy(g, s, b, BoundaryMode::kFree) == oracle::energy(ob, s.bits, b.word64(), true));
    }
  }
}

TEST_CASE("single-site partition function has the two-state closed form") {
  const BoxGeometry g = build_box(2, {1, 1});
  for (double beta : {0.0, 0.1, 0.45, 2.0}) {
    const double expected = std::log(std::exp(4 * beta) + std::exp(-4 * beta));
    CHECK(log_partition_function(g, beta, kNoField, all_plus_boundary(4)) ==
          doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("beta = 0 partition function is |V| log 2 for any boundary") {
  std::mt19937_64 rng(3);
  for (auto [w, h] : {std::pair{2, 3}, {4, 2}, {1, 7}}) {
    const BoxGeometry g = build_box(2, {w, h});
    const BoundaryCondition b = random_boundary(rng, g.boundary_size());
    CHECK(log_partition_function(g, 0.0, kNoField, b) ==
          doctest::Approx(g.volume() * std::log(2.0)).epsilon(1e-14));
  }
}

TEST_CASE("2x2 all-plus partition function: frozen 16-term value, both paths") {
  const BoxGeometry g = build_box(2, {2, 2});
  const double frozen = 4.0251206215051676;  // exhaustive 2^4 oracle
  const BoundaryCondition b = all_plus_boundary(8);
  CHECK(log_partition_function(g, 0.3, kNoField, b, BoundaryMode::kFixed, Method::kNaive) ==
        doctest::Approx(frozen).epsilon(1e-13));
  CHECK(log_partition_function(g, 0.3, kNoField, b, BoundaryMode::kFixed, Method::kTransfer) ==
        doctest::Approx(frozen).epsilon(1e-13));
}

TEST_CASE("no overflow at large beta and large fields") {
  const BoxGeometry g = build_box(2, {4, 5});
  const BoundaryCondition b = all_plus_boundary(g.boundary_size());
  const double lz = log_partition_function(g, 50.0, kNoField, b);  // beta|V| = 1000
  CHECK(std::isfinite(lz));
  // Ground state dominates: -beta*H = beta*(#edges). 31 interior + 18 crossing.
  CHECK(lz == doctest::Approx(50.0 * 49.0).epsilon(1e-9));

  FieldAssignment h = FieldAssignment::zeros(g.volume());
  for (int i = 0; i < g.volume(); ++i) h.values[i] = (i % 2 ? 300.0 : -250.0);
  CHECK(std::isfinite(log_partition_function(g, 30.0, h, b)));
}

TEST_CASE("distribution tables are normalized and uniform at beta 0") {
  std::mt19937_64 rng(5);
  for (auto [w, h] : {std::pair{1, 1}, {2, 2}, {2, 3}}) {
    const BoxGeometry g = build_box(2, {w, h});
    const BoundaryCondition b = random_boundary(rng, g.boundary_size());

    const DistributionTable uniform = distribution_table(g, 0.0, kNoField, b);
    for (double p : uniform.probabilities)
      CHECK(p == doctest::Approx(1.0 / uniform.size()).epsilon(1e-13));

    const DistributionTable t = distribution_table(g, 0.37, kNoField, b);
    double sum = 0.0;
    for (double p : t.probabilities) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("single-site conditional probability is the logistic closed form") {
  const BoxGeometry g = build_box(2, {1, 1});
  for (double beta : {0.05, 0.3, 0.9}) {
    const DistributionTable t = distribution_table(g, beta, kNoField, all_plus_boundary(4));
    const double expected = std::exp(4 * beta) / (std::exp(4 * beta) + std::exp(-4 * beta));
    CHECK(t.probabilities[1] == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("global spin flip reverses the table exactly at h = 0") {
  std::mt19937_64 rng(7);
  const BoxGeometry g = build_box(2, {2, 3});
  const BoundaryCondition b = random_boundary(rng, g.boundary_size());
  const DistributionTable t1 = distribution_table(g, 0.41, kNoField, b);
  const DistributionTable t2 =
      distribution_table(g, 0.41, kNoField, b.complemented(g.boundary_size()));
  const std::uint32_t mask = (1u << g.volume()) - 1;
  for (std::uint32_t s = 0; s < t1.probabilities.size(); ++s)
    CHECK(t1.probabilities[s] == t2.probabilities[(~s) & mask]);  // bit-exact
}

TEST_CASE("table probabilities match the oracle") {
  std::mt19937_64 rng(13);
  for (auto [w, h] : {std::pair{2, 2}, {3, 2}, {1, 4}}) {
    const BoxGeometry g = build_box(2, {w, h});
    const oracle::Box2D ob = oracle::make_box(w, h);
    const BoundaryCondition b = random_boundary(rng, g.boundary_size());
    const double beta = 0.33;
    const DistributionTable t = distribution_table(g, beta, kNoField, b);
    const oracle::Measure m = oracle::measure(ob, beta, {}, b.word64(), false);
    for (std::uint32_t s = 0; s < t.probabilities.size(); ++s)
      CHECK(t.probabilities[s] == doctest::Approx(m.p[s]).epsilon(1e-12));
  }
}

TEST_CASE("single-site magnetization is tanh(4 beta) under all-plus boundary") {
  const BoxGeometry g = build_box(2, {1, 1});
  for (double beta : {0.0, 0.2, 0.7}) {
    const auto m = magnetizations(g, beta, kNoField, all_plus_boundary(4));
    CHECK(m[0] == doctest::Approx(std::tanh(4 * beta)).epsilon(1e-14));
  }
}

TEST_CASE("beta = 0 magnetizations vanish exactly") {
  std::mt19937_64 rng(17);
  for (auto [w, h] : {std::pair{2, 2}, {3, 4}, {1, 6}}) {
    const BoxGeometry g = build_box(2, {w, h});
    const BoundaryCondition b = random_boundary(rng, g.boundary_size());
    for (double m : magnetizations(g, 0.0, kNoField, b)) CHECK(m == 0.0);
  }
}

TEST_CASE("3x3 center magnetization: frozen enumeration value on both paths") {
  const BoxGeometry g = build_box(2, {3, 3});
  const double frozen = 0.88506222089067532;  // exhaustive 2^9 oracle
  const BoundaryCondition b = all_plus_boundary(12);
  const int center = g.interior_index(Site{1, 1}).value();
  CHECK(magnetizations(g, 0.44, kNoField, b, BoundaryMode::kFixed, Method::kNaive)[center] ==
        doctest::Approx(frozen).epsilon(1e-13));
  CHECK(magnetizations(g, 0.44, kNoField, b, BoundaryMode::kFixed, Method::kTransfer)[center] ==
        doctest::Approx(frozen).epsilon(1e-13));
}

TEST_CASE("naive and transfer magnetizations agree within 1e-12") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> beta_dist(0.0, 1.0);
  const std::vector<std::pair<int, int>> boxes = {{1, 1}, {1, 2}, {2, 2}, {2, 3}, {3, 3},
                                                  {2, 4}, {1, 8}, {4, 4}, {2, 8}, {3, 5}};
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto [w, h] = boxes[trial % boxes.size()];
    const BoxGeometry g = build_box(2, {w, h});
    const double beta = beta_dist(rng);
    const BoundaryCondition b = random_boundary(rng, g.boundary_size());
    const auto naive = magnetizations(g, beta, kNoField, b, BoundaryMode::kFixed, Method::kNaive);
    const auto transfer =
        magnetizations(g, beta, kNoField, b, BoundaryMode::kFixed, Method::kTransfer);
    for (int i = 0; i < g.volume(); ++i) {
      CHECK(std::abs(naive[i] - transfer[i]) <= 1e-12);
      CHECK(std::abs(naive[i]) <= 1.0 + 1e-15);
    }
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("transfer path also handles fields and tall boxes") {
  const BoxGeometry g = build_box(2, {2, 6});
  FieldAssignment h = FieldAssignment::zeros(g.volume());
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> hd(-1.0, 1.0);
  for (double& x : h.values) x = hd(rng);
  const BoundaryCondition b = random_boundary(rng, g.boundary_size());
  const auto naive = magnetizations(g, 0.35, h, b, BoundaryMode::kFixed, Method::kNaive);
  const auto transfer = magnetizations(g, 0.35, h, b, BoundaryMode::kFixed, Method::kTransfer);
  for (int i = 0; i < g.volume(); ++i) CHECK(std::abs(naive[i] - transfer[i]) <= 1e-12);

  CHECK(log_partition_function(g, 0.35, h, b, BoundaryMode::kFixed, Method::kNaive) ==
        doctest::Approx(log_partition_function(g, 0.35, h, b, BoundaryMode::kFixed,
                                               Method::kTransfer))
            .epsilon(1e-13));
  CHECK_THROWS_AS(magnetizations(build_box(1, {3}), 0.3, kNoField, BoundaryCondition{0},
                                 BoundaryMode::kFixed, Method::kTransfer),
                  std::invalid_argument);
}

TEST_CASE("free-boundary measures agree across both paths") {
  const BoxGeometry g = build_box(2, {3, 4});
  const BoundaryCondition none{0};
  const auto naive =
      magnetizations(g, 0.6, kNoField, none, BoundaryMode::kFree, Method::kNaive);
  const auto transfer =
      magnetizations(g, 0.6, kNoField, none, BoundaryMode::kFree, Method::kTransfer);
  for (int i = 0; i < g.volume(); ++i) {
    CHECK(std::abs(naive[i] - transfer[i]) <= 1e-12);
    CHECK(std::abs(naive[i]) <= 1e-13);  // no boundary, no field: symmetric
  }
  CHECK(log_partition_function(g, 0.6, kNoField, none, BoundaryMode::kFree, Method::kNaive) ==
        doctest::Approx(log_partition_function(g, 0.6, kNoField, none, BoundaryMode::kFree,
                                               Method::kTransfer))
            .epsilon(1e-13));
}

TEST_CASE("both partition paths report their size limits") {
  // 27 sites: too many to enumerate, and the transfer path needs d = 2.
  const BoxGeometry cube = build_box(3, {3, 3, 3});
  CHECK_THROWS_AS(log_partition_function(cube, 0.3, kNoField,
                                         all_plus_boundary(cube.boundary_size())),
                  std::invalid_argument);
  // d = 2 but the shorter extent exceeds the transfer state limit.
  const BoxGeometry wide = build_box(2, {21, 30});
  CHECK_THROWS_AS(log_partition_function(wide, 0.3, kNoField,
                                         all_plus_boundary(wide.boundary_size())),
                  std::invalid_argument);
}

TEST_CASE("transfer path scales to strips far beyond enumeration") {
  const BoxGeometry g = build_box(2, {3, 2000});
  const BoundaryCondition b = all_plus_boundary(g.boundary_size());
  const auto m = magnetizations(g, 0.38, kNoField, b, BoundaryMode::kFixed, Method::kTransfer);
  REQUIRE(static_cast<int>(m.size()) == 6000);
  for (double x : m) {
    CHECK(x > 0.0);
    CHECK(x <= 1.0);
  }
  // Reflection symmetry along the strip and bulk translation invariance.
  const auto site = [&](int x0, int x1) { return g.interior_index(Site{x0, x1}).value(); };
  CHECK(m[site(1, 3)] == doctest::Approx(m[site(1, 1996)]).epsilon(1e-12));
  CHECK(m[site(0, 1000)] == doctest::Approx(m[site(2, 1000)]).epsilon(1e-12));
  CHECK(m[site(1, 1000)] == doctest::Approx(m[site(1, 1001)]).epsilon(1e-10));
}

TEST_CASE("global spin-flip mirror: magnetizations negate bit-exactly at h = 0") {
  std::mt19937_64 rng(31);
  for (auto [w, h] : {std::pair{2, 2}, {3, 3}, {1, 5}}) {
    const BoxGeometry g = build_box(2, {w, h});
    for (int rep = 0; rep < 10; ++rep) {
      const BoundaryCondition b = random_boundary(rng, g.boundary_size());
      const auto m1 = magnetizations(g, 0.47, kNoField, b);
      const auto m2 = magnetizations(g, 0.47, kNoField, b.complemented(g.boundary_size()));
      for (int i = 0; i < g.volume(); ++i) CHECK(m1[i] == -m2[i]);
    }
  }
}

TEST_CASE("FKG monotonicity in the boundary condition") {
  std::mt19937_64 rng(37);
  for (auto [w, h] : {std::pair{2, 2}, {2, 3}, {3, 3}}) {
    const BoxGeometry g = build_box(2, {w, h});
    const int nb = g.boundary_size();
    for (int rep = 0; rep < 20; ++rep) {
      const BoundaryCondition lower = random_boundary(rng, nb);
      const BoundaryCondition higher{lower.word64() | (rng() & ((1ull << nb) - 1))};
      const double beta = 0.1 + 0.5 * std::uniform_real_distribution<double>(0, 1)(rng);
      const auto m_lo = magnetizations(g, beta, kNoField, lower);
      const auto m_hi = magnetizations(g, beta, kNoField, higher);
      for (int i = 0; i < g.volume(); ++i) CHECK(m_hi[i] >= m_lo[i] - 1e-12);
    }
  }
}

TEST_CASE("GKS positivity under the all-plus boundary") {
  for (auto [w, h] : {std::pair{2, 2}, {3, 3}, {2, 5}}) {
    const BoxGeometry g = build_box(2, {w, h});
    for (double beta : {0.05, 0.3, 0.8}) {
      for (double m : magnetizations(g, beta, kNoField, all_plus_boundary(g.boundary_size())))
        CHECK(m >= 0.0);
    }
  }
}

TEST_CASE("magnetizations match the oracle with fields") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> hd(-2.0, 2.0);
  for (auto [w, h] : {std::pair{2, 2}, {3, 2}}) {
    const BoxGeometry g = build_box(2, {w, h});
    const oracle::Box2D ob = oracle::make_box(w, h);
    FieldAssignment f = FieldAssignment::zeros(g.volume());
    for (double& x : f.values) x = hd(rng);
    const BoundaryCondition b = random_boundary(rng, g.boundary_size());
    const auto m = magnetizations(g, 0.52, f, b);
    const oracle::Measure om = oracle::measure(ob, 0.52, f.values, b.word64(), false);
    for (int i = 0; i < g.volume(); ++i) CHECK(m[i] == doctest::Approx(om.mag[i]).epsilon(1e-12));
  }
}

TEST_CASE("covariance basics") {
  const BoxGeometry g = build_box(2, {2, 2});
  const BoundaryCondition b = all_plus_boundary(8);
  CHECK(covariance(g, 0.0, kNoField, b, 0, 0) == 1.0);  // Var of a symmetric spin
  CHECK(covariance(g, 0.0, kNoField, b, 0, 3) == 0.0);  // independence at beta = 0
  CHECK(covariance(g, 0.5, kNoField, b, 1, 2) == doctest::Approx(covariance(g, 0.5, kNoField, b, 2, 1)).epsilon(1e-15));
  CHECK_THROWS_AS(covariance(g, 0.3, kNoField, b, 0, 9), std::invalid_argument);
}

TEST_CASE("two-spin free-boundary covariance is tanh(beta)") {
  const BoxGeometry g = build_box(2, {2, 1});
  for (double beta : {0.1, 0.37, 1.1}) {
    CHECK(covariance(g, beta, kNoField, BoundaryCondition{0}, 0, 1, BoundaryMode::kFree) ==
          doctest::Approx(std::tanh(beta)).epsilon(1e-14));
  }
}

TEST_CASE("covariance matches the oracle") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> hd(-1.5, 1.5);
  const BoxGeometry g = build_box(2, {3, 2});
  const oracle::Box2D ob = oracle::make_box(3, 2);
  FieldAssignment f = FieldAssignment::zeros(g.volume());
  for (double& x : f.values) x = hd(rng);
  const BoundaryCondition b = random_boundary(rng, g.boundary_size());
  for (int u = 0; u < g.volume(); ++u)
    for (int v = 0; v < g.volume(); ++v)
      CHECK(covariance(g, 0.44, f, b, u, v) ==
            doctest::Approx(oracle::covariance(ob, 0.44, f.values, b.word64(), false, u, v))
                .epsilon(1e-11));
}

TEST_CASE("input validation") {
  const BoxGeometry g = build_box(2, {2, 2});
  CHECK_THROWS_AS(log_partition_function(g, -0.1, kNoField, BoundaryCondition{0}),
                  std::invalid_argument);
  // Enumeration limits bind at the operations, not at geometry construction.
  const BoxGeometry big = build_box(2, {5, 5});
  CHECK_THROWS_AS(magnetizations(big, 0.3, kNoField, all_plus_boundary(big.boundary_size()),
                                 BoundaryMode::kFixed, Method::kNaive),
                  std::invalid_argument);
  CHECK_THROWS_AS(distribution_table(big, 0.3, kNoField, all_plus_boundary(big.boundary_size())),
                  std::invalid_argument);
  CHECK_NOTHROW(magnetizations(big, 0.3, kNoField, all_plus_boundary(big.boundary_size()),
                               BoundaryMode::kFixed, Method::kTransfer));
  CHECK_THROWS_AS(magnetizations(g, 0.3, FieldAssignment{{1.0, 2.0}}, BoundaryCondition{0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(magnetizations(g, 0.3, kNoField, BoundaryCondition{1ull << 20}),
                  std::invalid_argument);
  CHECK_THROWS_AS(energy(g, SpinConfiguration{1u << 7}, BoundaryCondition{0}),
                  std::invalid_argument);
}
