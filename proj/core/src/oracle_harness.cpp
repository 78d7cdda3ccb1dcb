#include "dscert/oracle_harness.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "dscert/certifier.hpp"
#include "dscert/lattice.hpp"
#include "dscert/orbits.hpp"
#include "dscert/parallel.hpp"
#include "dscert/transport.hpp"

namespace dscert {

namespace {

std::vector<std::pair<int, int>> boxes_up_to(int max_volume) {
  std::vector<std::pair<int, int>> out;
  for (int w = 1; w * w <= max_volume; ++w)
    for (int h = w; w * h <= max_volume; ++h) out.emplace_back(w, h);
  return out;
}

}  // namespace

OracleReport oracle_sweep(const OracleSweepConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (cfg.max_volume > 12)
    throw std::invalid_argument("oracle_sweep: max volume is 12 (tables get large)");

  OracleReport rep;
  rep.max_volume = cfg.max_volume;
  rep.betas = cfg.betas;

  for (auto [w, h] : boxes_up_to(cfg.max_volume)) {
    const BoxGeometry g = build_box(2, {w, h});
    const MetricSpec metric = MetricSpec::defaults(g.volume());
    const FieldAssignment none;
    for (double beta : cfg.betas) {
      for (int y = 0; y < g.boundary_size(); ++y) {
        const OrbitSet all = boundary_orbits(g, y, /*use_symmetry=*/false);
        std::vector<double> deltas(all.orbits.size(), 0.0);
        parallel_for(all.orbits.size(), cfg.workers, [&](std::size_t i) {
          const std::uint64_t pattern = all.orbits[i].representative;
          const BoundaryCondition up{pattern | (std::uint64_t{1} << y)};
          const BoundaryCondition down{pattern};

          const std::vector<double> m_up = magnetizations(g, beta, none, up);
          const std::vector<double> m_down = magnetizations(g, beta, none, down);
          std::vector<double> gap(m_up.size());
          for (std::size_t k = 0; k < gap.size(); ++k) gap[k] = m_up[k] - m_down[k];
          const double fast = kantorovich_monotone(gap);

          const DistributionTable mu = distribution_table(g, beta, none, up);
          const DistributionTable nu = distribution_table(g, beta, none, down);
          const double exact = kantorovich_exact(mu, nu, metric).distance;
          deltas[i] = std::abs(fast - exact);
        });

        OracleRow row;
        row.geometry_id = g.id();
        row.beta = beta;
        row.flip_site = y;
        row.patterns = all.orbits.size();
        for (double d : deltas) row.max_delta = std::max(row.max_delta, d);
        rep.comparisons += all.orbits.size();
        rep.max_delta = std::max(rep.max_delta, row.max_delta);
        rep.rows.push_back(std::move(row));
      }
    }
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

OracleReport oracle_single_site(int dimension, const std::vector<double>& betas) {
  const auto start = std::chrono::steady_clock::now();
  if (dimension < 1 || dimension > 3)
    throw std::invalid_argument("oracle_single_site: dimension must be in [1, 3]");

  OracleReport rep;
  rep.betas = betas;

  const BoxGeometry g = build_box(dimension, std::vector<int>(dimension, 1));
  for (double beta : betas) {
    const DependenceCoefficient c = dependence_coefficient(g, beta, 0);
    const SingleSiteResult direct = dobrushin_single_site(dimension, beta);
    SingleSiteRow row;
    row.dimension = dimension;
    row.beta = beta;
    row.box_value = c.value;
    row.direct_value = direct.coefficient;
    row.delta = std::abs(c.value - direct.coefficient);
    rep.single_site_max_delta = std::max(rep.single_site_max_delta, row.delta);
    rep.single_site.push_back(std::move(row));
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace dscert
