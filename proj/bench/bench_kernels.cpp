// Serial reference vs OpenMP kernels on the three sweeps.
#include <benchmark/benchmark.h>

#include "biset/kernels.hpp"
#include "biset/recovery.hpp"

namespace {

using biset::Exec;

void BM_IdentitySweep(benchmark::State& state, Exec exec) {
    const auto f = biset::general_form_metric(biset::univariate::cubic(), biset::univariate::exp(),
                                              biset::bivariate::exp_sum(), biset::bivariate::eta());
    biset::ProbeSampler sampler(7);
    const auto corteges = sampler.corteges(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(biset::identity_samples(f, corteges, exec));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RankSweep(benchmark::State& state, Exec exec) {
    const auto f = biset::canonical_metric();
    biset::ProbeSampler sampler(7);
    const auto corteges = sampler.corteges(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(biset::rank_samples(f, corteges, 1e-9, exec));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DetectSweep(benchmark::State& state, Exec exec) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto table = biset::generate_table(biset::random_coordinates(n, n, 3), 0.0, 0);
    const auto corteges = biset::detect_corteges(table.rows(), table.cols(), 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(biset::detect_residuals(table.values(), corteges, exec));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corteges.size()));
}

}  // namespace

BENCHMARK_CAPTURE(BM_IdentitySweep, serial, Exec::Serial)->Arg(1000)->Arg(10000)->UseRealTime();
BENCHMARK_CAPTURE(BM_IdentitySweep, parallel, Exec::Parallel)->Arg(1000)->Arg(10000)->UseRealTime();
BENCHMARK_CAPTURE(BM_RankSweep, serial, Exec::Serial)->Arg(1000)->Arg(10000)->UseRealTime();
BENCHMARK_CAPTURE(BM_RankSweep, parallel, Exec::Parallel)->Arg(1000)->Arg(10000)->UseRealTime();
BENCHMARK_CAPTURE(BM_DetectSweep, serial, Exec::Serial)->Arg(20)->Arg(40)->UseRealTime();
BENCHMARK_CAPTURE(BM_DetectSweep, parallel, Exec::Parallel)->Arg(20)->Arg(40)->UseRealTime();

BENCHMARK_MAIN();
