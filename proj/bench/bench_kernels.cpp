// Serial reference against the OpenMP paths of the hot kernels.
//   ./bench_kernels --benchmark_filter=Dipole

#include <complex>
#include <random>

#include <benchmark/benchmark.h>

#include "starkhhg/hankel.hpp"
#include "starkhhg/kernels.hpp"
#include "starkhhg/lewenstein.hpp"
#include "starkhhg/trajectories.hpp"

using namespace starkhhg;

namespace {

const LaserPulse pulse = LaserPulse::from_wavelength(800.0, 0.071);
const StarkParameters co = StarkParameters::carbon_monoxide();

kernels::DipoleGrid small_grid() {
  LewensteinOptions o;
  o.span_cycles = 1.0;
  o.tau_max_cycles = 0.5;
  return kernels::make_dipole_grid(pulse, co, o);
}

void DipoleReference(benchmark::State& state) {
  const auto grid = small_grid();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::dipole_reference(grid, StarkMode::first_order));
  }
}

void DipoleKernel(benchmark::State& state) {
  const auto grid = small_grid();
  const StarkMode modes[] = {StarkMode::first_order};
  const auto exec = state.range(0) ? Execution::parallel : Execution::serial;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::dipole_kernel(grid, modes, exec));
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

// Three modes in one sweep against three separate reference passes.
void DipoleKernelThreeModes(benchmark::State& state) {
  const auto grid = small_grid();
  const StarkMode modes[] = {StarkMode::none, StarkMode::first_order,
                             StarkMode::first_and_second};
  const auto exec = state.range(0) ? Execution::parallel : Execution::serial;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::dipole_kernel(grid, modes, exec));
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void TrajectoryScan(benchmark::State& state) {
  const VectorPotential vp(pulse);
  const auto exec = state.range(0) ? Execution::parallel : Execution::serial;
  for (auto _ : state) {
    benchmark::DoNotOptimize(trajectory_table(vp, co, {}, exec));
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void HankelRows(benchmark::State& state) {
  const HankelTransform ht(128, 1.0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd rows(512, ht.size());
  for (long i = 0; i < rows.size(); ++i) rows.data()[i] = {g(rng), g(rng)};
  const auto exec = state.range(0) ? Execution::parallel : Execution::serial;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ht.forward_rows(rows, exec));
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

}  // namespace

BENCHMARK(DipoleReference)->Unit(benchmark::kMillisecond);
BENCHMARK(DipoleKernel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(DipoleKernelThreeModes)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(TrajectoryScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(HankelRows)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
