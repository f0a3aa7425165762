// Serial reference vs OpenMP for the two embarrassingly parallel kernels:
// the analytic matching residual and the shooting mismatch on an energy grid.

#include <benchmark/benchmark.h>

#include "dshell/oracle.hpp"
#include "dshell/spectrum.hpp"

namespace {

using namespace dshell;

const Channel kChannel = Channel::from_two_j(3);
const ShellParams kShell(1.0, 1.0, 0.9);

void residual_serial(benchmark::State& st) {
    const auto grid = energy_grid(kShell, static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(residual_on_grid_serial(kChannel, kShell, grid));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void residual_parallel(benchmark::State& st) {
    const auto grid = energy_grid(kShell, static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(residual_on_grid_parallel(kChannel, kShell, grid));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

const oracle::RegularizedPotential& bump() {
    static const oracle::RegularizedPotential v(0.9, 1.0, 3e-3, oracle::BumpShape::gaussian);
    return v;
}

void mismatch_serial(benchmark::State& st) {
    const auto grid = energy_grid(kShell, static_cast<int>(st.range(0)));
    for (auto _ : st) {
        benchmark::DoNotOptimize(oracle::mismatch_on_grid_serial(kChannel, 1.0, bump(), {}, grid));
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void mismatch_parallel(benchmark::State& st) {
    const auto grid = energy_grid(kShell, static_cast<int>(st.range(0)));
    for (auto _ : st) {
        benchmark::DoNotOptimize(oracle::mismatch_on_grid_parallel(kChannel, 1.0, bump(), {}, grid));
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

BENCHMARK(residual_serial)->Arg(512)->Arg(4096)->Unit(benchmark::kMicrosecond);
BENCHMARK(residual_parallel)->Arg(512)->Arg(4096)->Unit(benchmark::kMicrosecond);
BENCHMARK(mismatch_serial)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(mismatch_parallel)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
