#include "dscert/inequality_lab.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dscert/lattice.hpp"
#include "dscert/parallel.hpp"
#include "dscert/spin_system.hpp"

namespace dscert {

double dss_margin(const BoxGeometry& g, double beta, const FieldAssignment& h, int u, int v) {
  if (g.volume() > 16) throw std::invalid_argument("dss_margin: |V| <= 16 required");
  if (u < 0 || u >= g.volume() || v < 0 || v >= g.volume())
    throw std::invalid_argument("dss_margin: site not in volume");
  if (!h.values.empty() && h.size() != g.volume())
    throw std::invalid_argument("dss_margin: field length must equal |V|");

  const BoundaryCondition none{0};
  const double cov_h =
      sweep_covariance(SpinSystem::interior(g, none, BoundaryMode::kFree, &h), beta, u, v);
  const double cov_0 =
      sweep_covariance(SpinSystem::interior(g, none, BoundaryMode::kFree, nullptr), beta, u, v);
  return cov_0 - cov_h;
}

namespace {

void validate_av(const AugmentedVolume& av) {
  if (av.box == nullptr) throw std::invalid_argument("augmented volume: missing box");
  if (av.adjoined_site < 0 || av.adjoined_site >= av.box->boundary_size())
    throw std::invalid_argument("augmented volume: adjoined site out of range");
}

}  // namespace

double adjoined_magnetization(const AugmentedVolume& av, double beta, double h_y) {
  validate_av(av);
  const SpinSystem sys = SpinSystem::augmented(*av.box, av.frozen, av.adjoined_site, h_y,
                                               av.free_others ? BoundaryMode::kFree : BoundaryMode::kFixed);
  return sweep_measure(sys, beta).magnetization[av.box->volume()];
}

double balancing_field(const AugmentedVolume& av, double beta, double tol) {
  validate_av(av);
  if (!(tol > 0.0)) throw std::invalid_argument("balancing_field: tolerance must be > 0");

  const double reach = 2.0 * av.box->dimension() * beta + 1.0;
  double lo = -reach, hi = reach;
  double f_lo = adjoined_magnetization(av, beta, lo);
  double f_hi = adjoined_magnetization(av, beta, hi);
  // <s_y> is strictly increasing in h_y and the bracket always straddles 0;
  // anything else is a defect, not a model state.
  if (!(f_lo < 0.0 && f_hi > 0.0) || !(f_lo < f_hi))
    throw std::runtime_error("balancing_field: bracket does not straddle zero");

  double mid = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double f = adjoined_magnetization(av, beta, mid);
    if (std::abs(f) <= tol) return mid;
    if (f > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  throw std::runtime_error("balancing_field: bisection failed to converge");
}

double covariance_identity_residual(const AugmentedVolume& av, double beta, int x, double tol) {
  validate_av(av);
  const BoxGeometry& g = *av.box;
  if (x < 0 || x >= g.volume())
    throw std::invalid_argument("covariance_identity_residual: site not in volume");
  if (av.free_others)
    throw std::invalid_argument(
        "covariance_identity_residual: needs the frozen-boundary convention");

  const double h_star = balancing_field(av, beta, tol);
  const SpinSystem sys = SpinSystem::augmented(g, av.frozen, av.adjoined_site, h_star,
                                               av.free_others ? BoundaryMode::kFree : BoundaryMode::kFixed);
  const double cov = sweep_covariance(sys, beta, x, g.volume());

  const FieldAssignment none;
  const BoundaryCondition up = av.frozen.with_plus(av.adjoined_site);
  const BoundaryCondition down = up.flipped(av.adjoined_site);
  const double gap = magnetizations(g, beta, none, up)[x] - magnetizations(g, beta, none, down)[x];

  return std::abs(gap - 2.0 * cov);
}

AugmentedConditionals augmented_conditionals(const AugmentedVolume& av, double beta, double h_y) {
  validate_av(av);
  const BoxGeometry& g = *av.box;
  if (g.volume() + 1 > kMaxTableVolume)
    throw std::invalid_argument("augmented_conditionals: volume exceeds the table limit");

  const SpinSystem sys = SpinSystem::augmented(g, av.frozen, av.adjoined_site, h_y,
                                               av.free_others ? BoundaryMode::kFree : BoundaryMode::kFixed);
  double log_z = 0.0;
  const std::vector<double> joint = sweep_table(sys, beta, &log_z);

  const std::size_t half = joint.size() / 2;
  const std::uint32_t y_bit = 1u << g.volume();

  AugmentedConditionals out;
  out.given_plus.probabilities.assign(half, 0.0);
  out.given_minus.probabilities.assign(half, 0.0);
  double p_plus = 0.0;
  for (std::uint32_t s = 0; s < half; ++s) {
    out.given_plus.probabilities[s] = joint[s | y_bit];
    out.given_minus.probabilities[s] = joint[s];
    p_plus += joint[s | y_bit];
  }
  out.prob_plus = p_plus;
  const double p_minus = 1.0 - p_plus;
  for (std::uint32_t s = 0; s < half; ++s) {
    out.given_plus.probabilities[s] /= p_plus;
    out.given_minus.probabilities[s] /= p_minus;
  }
  // Conditional log partition functions are not meaningful here; carry the
  // joint value for reference.
  out.given_plus.log_z = log_z;
  out.given_minus.log_z = log_z;
  return out;
}

// ---------------------------------------------------------------------------
// Seeded random sweep.

namespace {

// SplitMix64: tiny, portable, and stable across standard libraries.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double closed_open() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }  // [0, 1)
  double open_closed() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }  // (0, 1]

  int range(int n) {  // [0, n)
    return static_cast<int>(next() % static_cast<std::uint64_t>(n));
  }
};

}  // namespace

DssTrial dss_replay(const DssSweepConfig& cfg, std::uint64_t index) {
  if (cfg.max_extent < 1 || cfg.max_extent > 4)
    throw std::invalid_argument("dss: max extent must be in [1, 4]");

  SplitMix64 rng(cfg.seed ^ (0xA5A5A5A5DEADBEEFull + index * 0x9E3779B97F4A7C15ull));

  DssTrial t;
  t.index = index;
  t.width = 1 + rng.range(cfg.max_extent);
  t.height = 1 + rng.range(cfg.max_extent);
  t.beta = rng.open_closed();

  const int volume = t.width * t.height;
  t.field.resize(volume);
  for (int i = 0; i < volume; ++i)
    t.field[i] = cfg.zero_field ? 0.0 : (-2.0 + 4.0 * rng.closed_open());

  t.u = rng.range(volume);
  // 5% of trials deliberately compare a site with itself.
  if (rng.closed_open() < 0.05 || volume == 1) {
    t.v = t.u;
  } else {
    t.v = rng.range(volume - 1);
    if (t.v >= t.u) ++t.v;
  }
  t.u_equals_v = (t.u == t.v);

  const BoxGeometry g = build_box(2, {t.width, t.height});
  t.margin = dss_margin(g, t.beta, FieldAssignment{t.field}, t.u, t.v);
  return t;
}

DssSweepReport dss_sweep(const DssSweepConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();

  DssSweepReport rep;
  rep.config = cfg;
  rep.trials.resize(cfg.trials);

  parallel_for(cfg.trials, cfg.workers,
               [&](std::size_t i) { rep.trials[i] = dss_replay(cfg, i); });

  double min_margin = std::numeric_limits<double>::infinity();
  double min_margin_eq = std::numeric_limits<double>::infinity();
  for (const DssTrial& t : rep.trials) {
    min_margin = std::min(min_margin, t.margin);
    if (t.u_equals_v) {
      ++rep.u_equals_v_count;
      min_margin_eq = std::min(min_margin_eq, t.margin);
    }
    if (t.margin < cfg.violation_threshold) ++rep.violation_count;
  }
  rep.min_margin = rep.trials.empty() ? 0.0 : min_margin;
  rep.min_margin_u_equals_v = (rep.u_equals_v_count == 0) ? 0.0 : min_margin_eq;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace dscert
