#include <cmath>

#include <benchmark/benchmark.h>

#include "oqb/dynamics.hpp"
#include "oqb/hamiltonian.hpp"
#include "oqb/linalg.hpp"

namespace {

oqb::AggregateParams organic(int n) { return {n, 1.0, -0.2, 0.8}; }

double density_g(int n) { return 0.5 / std::sqrt(static_cast<double>(n)); }

void BM_SubspaceTables(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    oqb::SubspaceTables tables(n, n, true);
    benchmark::DoNotOptimize(tables.basis().dim());
  }
}
BENCHMARK(BM_SubspaceTables)->DenseRange(8, 14, 2)->Unit(benchmark::kMillisecond);

void BM_Assemble(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const oqb::SubspaceTables tables(n, n, true);
  for (auto _ : state) {
    auto ops = oqb::assemble_fd(tables, organic(n), {1.0, n}, density_g(n));
    benchmark::DoNotOptimize(ops.hamiltonian.matrix.data());
  }
  state.counters["dim"] = static_cast<double>(tables.basis().dim());
}
BENCHMARK(BM_Assemble)->DenseRange(8, 14, 2)->Unit(benchmark::kMillisecond);

void BM_Eigh(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const oqb::SubspaceTables tables(n, n, true);
  const auto ops = oqb::assemble_fd(tables, organic(n), {1.0, n}, density_g(n));
  for (auto _ : state) {
    auto eig = oqb::eigh(ops.hamiltonian.matrix);
    benchmark::DoNotOptimize(eig.values.data());
  }
  state.counters["dim"] = static_cast<double>(ops.hamiltonian.dim());
}
BENCHMARK(BM_Eigh)->DenseRange(8, 14, 2)->Unit(benchmark::kMillisecond);

void BM_Trajectory(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const oqb::SubspaceTables tables(n, n, true);
  const auto p = organic(n);
  const auto ops = oqb::assemble_fd(tables, p, {1.0, n}, density_g(n));
  const oqb::ChargingDynamics dyn(ops.hamiltonian, ops.molecular,
                                  oqb::initial_vector(tables.basis(), n, p), p);
  const oqb::TimeGrid grid{0.01, 100.0};
  for (auto _ : state) {
    auto traj = dyn.trajectory(grid);
    benchmark::DoNotOptimize(traj.e_density.data());
  }
}
BENCHMARK(BM_Trajectory)->DenseRange(8, 12, 2)->Unit(benchmark::kMillisecond);

void BM_MolecularSector(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto sector = oqb::make_molecular_sector(n, n / 2, 0);
    benchmark::DoNotOptimize(sector.szsz.data());
  }
}
BENCHMARK(BM_MolecularSector)->DenseRange(8, 14, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
