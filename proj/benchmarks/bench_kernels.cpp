#include <benchmark/benchmark.h>

#include "dscert/certifier.hpp"
#include "dscert/lattice.hpp"
#include "dscert/spin_system.hpp"
#include "dscert/transport.hpp"

using namespace dscert;

namespace {

const FieldAssignment kNoField;

void SweepMeasure(benchmark::State& state) {
  const BoxGeometry g = build_box(2, {3, static_cast<int>(state.range(0))});
  const BoundaryCondition b = all_plus_boundary(g.boundary_size());
  const SpinSystem sys = SpinSystem::interior(g, b, BoundaryMode::kFixed, nullptr);
  for (auto _ : state) {
    MeasureSummary m = sweep_measure(sys, 0.3);
    benchmark::DoNotOptimize(m.log_z);
  }
  state.SetItemsProcessed(state.iterations() * (1ll << g.volume()));
}
BENCHMARK(SweepMeasure)->Arg(3)->Arg(4)->Arg(6);

void TransferTallBox(benchmark::State& state) {
  const BoxGeometry g = build_box(2, {2, static_cast<int>(state.range(0))});
  const BoundaryCondition b = all_plus_boundary(g.boundary_size());
  for (auto _ : state) {
    auto m = magnetizations(g, 0.4, kNoField, b, BoundaryMode::kFixed, Method::kTransfer);
    benchmark::DoNotOptimize(m.data());
  }
}
BENCHMARK(TransferTallBox)->Arg(4)->Arg(8)->Arg(12);

void DependenceCoefficient3x3(benchmark::State& state) {
  const BoxGeometry g = build_box(2, {3, 3});
  CertifierOptions opts;
  opts.workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    DependenceCoefficient c = dependence_coefficient(g, 0.35, 0, opts);
    benchmark::DoNotOptimize(c.value);
  }
}
BENCHMARK(DependenceCoefficient3x3)->Arg(1)->Arg(2);

void ExactTransport64(benchmark::State& state) {
  const BoxGeometry g = build_box(2, {2, 3});
  const BoundaryCondition up = all_plus_boundary(g.boundary_size());
  const DistributionTable mu = distribution_table(g, 0.4, kNoField, up);
  const DistributionTable nu = distribution_table(g, 0.4, kNoField, up.flipped(2));
  const MetricSpec metric = MetricSpec::defaults(g.volume());
  for (auto _ : state) {
    TransportSolution sol = kantorovich_exact(mu, nu, metric);
    benchmark::DoNotOptimize(sol.distance);
  }
}
BENCHMARK(ExactTransport64);

}  // namespace

BENCHMARK_MAIN();
