#include <bit>
#include <cmath>
#include <random>

#include "doctest.h"
#include "dscert/lattice.hpp"
#include "dscert/transport.hpp"
#include "oracles.hpp"

using namespace dscert;

namespace {

const FieldAssignment kNoField;

DistributionTable random_table(std::mt19937_64& rng, int volume) {
  DistributionTable t;
  t.probabilities.resize(std::size_t{1} << volume);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  double sum = 0.0;
  for (double& p : t.probabilities) {
    p = u(rng);
    sum += p;
  }
  for (double& p : t.probabilities) p /= sum;
  return t;
}

double mean_total_spin(const DistributionTable& t, int volume) {
  double total = 0.0;
  for (std::uint32_t s = 0; s < t.probabilities.size(); ++s)
    total += t.probabilities[s] * (2 * std::popcount(s) - volume);
  return total;
}

}  // namespace

TEST_CASE("identical tables are at distance zero with a diagonal plan") {
  std::mt19937_64 rng(1);
  const DistributionTable t = random_table(rng, 3);
  const TransportSolution sol = kantorovich_exact(t, t, MetricSpec::defaults(3));
  CHECK(sol.distance == 0.0);
  double plan_cost = 0.0;
  for (const CouplingEntry& e : sol.plan.entries)
    plan_cost += e.mass * 2.0 * std::popcount(e.from ^ e.to);
  CHECK(plan_cost == 0.0);
  CHECK(sol.plan.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two point masses are at their metric distance") {
  for (auto [a, b] : {std::pair<std::uint32_t, std::uint32_t>{0u, 7u}, {1u, 2u}, {0u, 15u}}) {
    DistributionTable mu, nu;
    mu.probabilities.assign(16, 0.0);
    nu.probabilities.assign(16, 0.0);
    mu.probabilities[a] = 1.0;
    nu.probabilities[b] = 1.0;
    const TransportSolution sol = kantorovich_exact(mu, nu, MetricSpec::defaults(4));
    CHECK(sol.distance == doctest::Approx(2.0 * std::popcount(a ^ b)).epsilon(1e-15));
    REQUIRE(sol.plan.entries.size() == 1);
    CHECK(sol.plan.entries[0].from == a);
    CHECK(sol.plan.entries[0].to == b);
  }
}

TEST_CASE("single-site flip pair: distance equals the mean difference") {
  const BoxGeometry g = build_box(2, {1, 1});
  const BoundaryCondition up = all_plus_boundary(4);
  const DistributionTable mu = distribution_table(g, 0.3, kNoField, up);
  const DistributionTable nu = distribution_table(g, 0.3, kNoField, up.flipped(3));
  const TransportSolution sol = kantorovich_exact(mu, nu, MetricSpec::defaults(1));
  const double expected = std::tanh(1.2) - std::tanh(0.6);  // 0.29660504001411991
  CHECK(sol.distance == doctest::Approx(expected).epsilon(1e-13));
  CHECK(variational_distance(mu, nu) == doctest::Approx(expected / 2).epsilon(1e-13));
}

TEST_CASE("variational distance basics") {
  DistributionTable mu, nu;
  mu.probabilities = {0.5, 0.5, 0.0, 0.0};
  nu.probabilities = {0.0, 0.0, 0.25, 0.75};
  CHECK(variational_distance(mu, mu) == 0.0);
  CHECK(variational_distance(mu, nu) == 1.0);  // disjoint supports
}

TEST_CASE("exact solver under the discrete metric reproduces variational distance") {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 10; ++rep) {
    const DistributionTable mu = random_table(rng, 3);
    const DistributionTable nu = random_table(rng, 3);
    std::vector<double> supply(mu.probabilities.begin(), mu.probabilities.end());
    std::vector<double> demand(nu.probabilities.begin(), nu.probabilities.end());
    std::vector<double> cost(supply.size() * demand.size(), 1.0);
    for (std::size_t i = 0; i < supply.size(); ++i) cost[i * demand.size() + i] = 0.0;
    const auto sol = transport_detail::solve_transport(supply, demand, cost);
    CHECK(sol.cost == doctest::Approx(variational_distance(mu, nu)).epsilon(1e-12));
  }
}

TEST_CASE("dense solver agrees with the permutation-vertex oracle") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::uniform_int_distribution<int> cost_pick(0, 9);
  for (int rep = 0; rep < 40; ++rep) {
    const int m = 2 + static_cast<int>(rng() % 3);  // 2..4
    const int n = 2 + static_cast<int>(rng() % 3);
    std::vector<double> supply(m), demand(n);
    double total = 0.0;
    for (double& x : supply) {
      x = u(rng);
      total += x;
    }
    double dtotal = 0.0;
    for (double& x : demand) {
      x = u(rng);
      dtotal += x;
    }
    for (double& x : demand) x *= total / dtotal;

    std::vector<std::vector<double>> cost(m, std::vector<double>(n));
    std::vector<double> flat(m * n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) flat[i * n + j] = cost[i][j] = cost_pick(rng);

    const auto sol = transport_detail::solve_transport(supply, demand, flat);
    const double expected = oracle::tiny_kantorovich(supply, demand, cost);
    CHECK(sol.cost == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("metric axioms hold on random tables") {
  std::mt19937_64 rng(4);
  const MetricSpec metric = MetricSpec::defaults(3);
  for (int rep = 0; rep < 8; ++rep) {
    const DistributionTable a = random_table(rng, 3);
    const DistributionTable b = random_table(rng, 3);
    const DistributionTable c = random_table(rng, 3);
    const double ab = kantorovich_exact(a, b, metric).distance;
    const double ba = kantorovich_exact(b, a, metric).distance;
    const double ac = kantorovich_exact(a, c, metric).distance;
    const double cb = kantorovich_exact(c, b, metric).distance;
    CHECK(std::abs(ab - ba) <= 1e-9);
    CHECK(kantorovich_exact(a, a, metric).distance <= 1e-12);
    CHECK(ab <= ac + cb + 1e-9);
  }
}

TEST_CASE("duality lower bound: distance dominates the total-spin gap") {
  std::mt19937_64 rng(5);
  const MetricSpec metric = MetricSpec::defaults(4);
  for (int rep = 0; rep < 10; ++rep) {
    const DistributionTable a = random_table(rng, 4);
    const DistributionTable b = random_table(rng, 4);
    const double d = kantorovich_exact(a, b, metric).distance;
    CHECK(d >= std::abs(mean_total_spin(a, 4) - mean_total_spin(b, 4)) - 1e-9);
  }
}

TEST_CASE("coupling plans have the right marginals and attain the distance") {
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 6; ++rep) {
    const DistributionTable a = random_table(rng, 3);
    const DistributionTable b = random_table(rng, 3);
    const TransportSolution sol = kantorovich_exact(a, b, MetricSpec::defaults(3));
    std::vector<double> row(8, 0.0), col(8, 0.0);
    double plan_cost = 0.0;
    for (const CouplingEntry& e : sol.plan.entries) {
      CHECK(e.mass >= 0.0);
      row[e.from] += e.mass;
      col[e.to] += e.mass;
      plan_cost += e.mass * 2.0 * std::popcount(e.from ^ e.to);
    }
    for (int s = 0; s < 8; ++s) {
      CHECK(std::abs(row[s] - a.probabilities[s]) <= 1e-10);
      CHECK(std::abs(col[s] - b.probabilities[s]) <= 1e-10);
    }
    CHECK(std::abs(plan_cost - sol.distance) <= 1e-9);
  }
}

TEST_CASE("monotone route: clipping and rejection thresholds") {
  CHECK(kantorovich_monotone(std::vector<double>{}) == 0.0);
  CHECK(kantorovich_monotone(std::vector<double>{0.0, 0.0}) == 0.0);
  CHECK(kantorovich_monotone(std::vector<double>{0.25, 0.5}) == doctest::Approx(0.75));
  CHECK(kantorovich_monotone(std::vector<double>{0.25, -1e-11}) == doctest::Approx(0.25));
  CHECK_THROWS_AS(kantorovich_monotone(std::vector<double>{0.25, -1e-6}), std::invalid_argument);
}

TEST_CASE("monotone route equals the exact solver on ordered flip pairs") {
  for (auto [w, h] : {std::pair{1, 1}, {1, 2}, {2, 2}}) {
    const BoxGeometry g = build_box(2, {w, h});
    const MetricSpec metric = MetricSpec::defaults(g.volume());
    const int nb = g.boundary_size();
    for (double beta : {0.1, 0.3, 0.5}) {
      for (int y = 0; y < nb; ++y) {
        for (std::uint64_t raw = 0; raw < (1ull << (nb - 1)); ++raw) {
          const std::uint64_t low = raw & ((1ull << y) - 1);
          const std::uint64_t pattern = low | ((raw ^ low) << 1);
          const BoundaryCondition up{pattern | (1ull << y)};
          const BoundaryCondition down{pattern};
          const auto m_up = magnetizations(g, beta, kNoField, up);
          const auto m_down = magnetizations(g, beta, kNoField, down);
          std::vector<double> gap(m_up.size());
          for (std::size_t i = 0; i < gap.size(); ++i) gap[i] = m_up[i] - m_down[i];
          const double fast = kantorovich_monotone(gap);
          const double exact =
              kantorovich_exact(distribution_table(g, beta, kNoField, up),
                                distribution_table(g, beta, kNoField, down), metric)
                  .distance;
          CHECK(std::abs(fast - exact) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("solver input validation") {
  CHECK_THROWS_AS(transport_detail::solve_transport({1.0}, {0.5}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(transport_detail::solve_transport({1.0, -0.1}, {0.9}, {0.0, 0.0}),
                  std::invalid_argument);
  DistributionTable bad;
  bad.probabilities = {0.5, 0.5, 0.0};  // not a power of two
  CHECK_THROWS_AS(kantorovich_exact(bad, bad, MetricSpec::defaults(2)), std::invalid_argument);
}
