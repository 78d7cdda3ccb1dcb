#include "dscert/certifier.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "dscert/lattice.hpp"
#include "dscert/orbits.hpp"
#include "dscert/parallel.hpp"
#include "dscert/spin_system.hpp"
#include "dscert/transport.hpp"

namespace dscert {

namespace {

struct PatternResult {
  double distance = 0.0;  // Kantorovich distance of the flip pair
  bool exact_fallback = false;
};

// Flip-pair distance for one configuration of dV \ {y}: the boundary with
// sigma_y = +1 dominates the one with sigma_y = -1, so the monotone-coupling
// route reduces to the sum of magnetization gaps.
PatternResult flip_pair_distance(const BoxGeometry& g, double beta, int y,
                                 std::uint64_t pattern, CoefficientMode mode) {
  const BoundaryCondition up{pattern | (std::uint64_t{1} << y)};
  const BoundaryCondition down{pattern};
  PatternResult out;

  if (mode == CoefficientMode::kOracle) {
    const FieldAssignment none;
    const DistributionTable mu = distribution_table(g, beta, none, up);
    const DistributionTable nu = distribution_table(g, beta, none, down);
    out.distance = kantorovich_exact(mu, nu, MetricSpec::defaults(g.volume())).distance;
    out.exact_fallback = true;
    return out;
  }

  const FieldAssignment none;
  const std::vector<double> m_up = magnetizations(g, beta, none, up, BoundaryMode::kFixed, Method::kNaive);
  const std::vector<double> m_down =
      magnetizations(g, beta, none, down, BoundaryMode::kFixed, Method::kNaive);
  std::vector<double> gap(m_up.size());
  for (std::size_t i = 0; i < gap.size(); ++i) gap[i] = m_up[i] - m_down[i];
  try {
    out.distance = kantorovich_monotone(gap);
  } catch (const std::invalid_argument&) {
    // Non-ordered gap vector: fall back to the exact solver when tables fit.
    if (g.volume() > 12) throw;
    const DistributionTable mu = distribution_table(g, beta, none, up);
    const DistributionTable nu = distribution_table(g, beta, none, down);
    out.distance = kantorovich_exact(mu, nu, MetricSpec::defaults(g.volume())).distance;
    out.exact_fallback = true;
  }
  return out;
}

}  // namespace

DependenceCoefficient dependence_coefficient(const BoxGeometry& g, double beta,
                                             int boundary_site, const CertifierOptions& opts) {
  if (beta < 0.0) throw std::invalid_argument("dependence_coefficient: beta must be >= 0");
  if (boundary_site < 0 || boundary_site >= g.boundary_size())
    throw std::invalid_argument("dependence_coefficient: boundary site out of range");
  if (opts.mode == CoefficientMode::kOracle && g.volume() > 12)
    throw std::invalid_argument("dependence_coefficient: oracle mode needs |V| <= 12");

  OrbitSet orbits;
  if (opts.extremal_only) {
    // Exploration only: score the all-plus configuration of dV \ {y} (its
    // global flip is the all-minus one). A subset maximum never certifies.
    orbits.raw_count = std::uint64_t{1} << (g.boundary_size() - 1);
    const std::uint64_t full =
        ((g.boundary_size() == 64) ? ~0ull : ((std::uint64_t{1} << g.boundary_size()) - 1)) &
        ~(std::uint64_t{1} << boundary_site);
    orbits.orbits.push_back({full, 2});
  } else {
    orbits = boundary_orbits(g, boundary_site, opts.use_symmetry);
  }
  std::vector<double> values(orbits.orbits.size());
  std::vector<char> fallback(orbits.orbits.size(), 0);

  parallel_for(orbits.orbits.size(), opts.workers, [&](std::size_t i) {
    const PatternResult r =
        flip_pair_distance(g, beta, boundary_site, orbits.orbits[i].representative, opts.mode);
    values[i] = r.distance;
    fallback[i] = r.exact_fallback ? 1 : 0;
  });

  // Canonical reduction: scan in orbit order, strict improvement wins, so
  // the argmax is independent of the worker count.
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;

  DependenceCoefficient out;
  out.boundary_site = boundary_site;
  out.value = 0.5 * values[best];
  out.argmax_boundary =
      BoundaryCondition{orbits.orbits[best].representative | (std::uint64_t{1} << boundary_site)};
  bool any_fallback = false;
  for (char f : fallback) any_fallback |= (f != 0);
  out.method = (opts.mode == CoefficientMode::kOracle) ? "exact-ot"
               : any_fallback                          ? "exact-ot"
                                                       : "monotone";
  out.evaluated_patterns = orbits.orbits.size();
  out.raw_patterns = orbits.raw_count;
  return out;
}

CertificateReport certify_box(const BoxGeometry& g, double beta, const CertifierOptions& opts) {
  const auto start = std::chrono::steady_clock::now();

  CertificateReport rep;
  rep.geometry_id = g.id();
  rep.beta = beta;
  rep.mode = (opts.mode == CoefficientMode::kOracle) ? "oracle" : "fast";
  if (opts.extremal_only) rep.mode += "-extremal";
  rep.symmetry = opts.use_symmetry;
  rep.epsilon_guard = opts.epsilon_guard;
  rep.volume = g.volume();
  rep.certifying = !opts.extremal_only;
  rep.coefficients.resize(g.boundary_size());

  const std::uint64_t raw_per_site = std::uint64_t{1} << (g.boundary_size() - 1);
  rep.enumeration.raw_total = raw_per_site * g.boundary_size();

  if (opts.use_symmetry) {
    for (const BoundarySiteClass& cls : boundary_site_classes(g)) {
      const DependenceCoefficient rep_coeff =
          dependence_coefficient(g, beta, cls.representative, opts);
      rep.enumeration.evaluated += rep_coeff.evaluated_patterns;
      for (std::size_t k = 0; k < cls.members.size(); ++k) {
        DependenceCoefficient c = rep_coeff;
        c.boundary_site = cls.members[k];
        if (cls.members[k] != cls.representative) {
          // Transport the maximizing boundary through the symmetry.
          const std::vector<int>& p = cls.member_maps[k];
          std::uint64_t bits = 0;
          std::uint64_t rest = rep_coeff.argmax_boundary.word64();
          while (rest) {
            const int i = std::countr_zero(rest);
            bits |= std::uint64_t{1} << p[i];
            rest &= rest - 1;
          }
          c.argmax_boundary = BoundaryCondition{bits};
        }
        rep.coefficients[cls.members[k]] = c;
      }
    }
  } else {
    for (int y = 0; y < g.boundary_size(); ++y) {
      rep.coefficients[y] = dependence_coefficient(g, beta, y, opts);
      rep.enumeration.evaluated += rep.coefficients[y].evaluated_patterns;
    }
  }
  rep.enumeration.skipped_by_symmetry = rep.enumeration.raw_total - rep.enumeration.evaluated;

  double sum = 0.0;
  for (const DependenceCoefficient& c : rep.coefficients) sum += c.value;
  rep.coefficient_sum = sum;
  rep.holds = sum < static_cast<double>(rep.volume) - opts.epsilon_guard;

  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

SingleSiteResult dobrushin_single_site(int dimension, double beta) {
  if (dimension < 1 || dimension > 12)
    throw std::invalid_argument("dobrushin_single_site: dimension must be in [1, 12]");
  if (beta < 0.0) throw std::invalid_argument("dobrushin_single_site: beta must be >= 0");
  const int others = 2 * dimension - 1;

  // Conditional law of one spin given its neighbors depends only on their
  // sum; maximize the flip-pair distance over all 2^(2d-1) assignments of
  // the non-flipped neighbors.
  double best = 0.0;
  for (std::uint32_t cfg = 0; cfg < (1u << others); ++cfg) {
    const int m = 2 * std::popcount(cfg) - others;
    const double diff =
        0.5 * std::abs(std::tanh(beta * (m + 1)) - std::tanh(beta * (m - 1)));
    best = std::max(best, diff);
  }

  SingleSiteResult out;
  out.coefficient = best;
  out.sum = 2.0 * dimension * best;
  out.condition_holds = out.sum < 1.0;
  return out;
}

}  // namespace dscert
