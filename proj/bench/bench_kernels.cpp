// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

// OpenMP kernels against their serial twins.

#include "mariner/parallel.hpp"
#include "mariner/pathloss.hpp"
#include "mariner/smallscale.hpp"
#include "mariner/sounder.hpp"
#include "mariner/sparsity.hpp"

#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>

namespace {

using namespace mariner;

template <bool Parallel>
void BM_Sum(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto term = [](std::size_t i) { return std::log1p(static_cast<double>(i)); };
    for (auto _ : state)
        benchmark::DoNotOptimize(Parallel ? par::sum(n, term) : serial::sum(n, term));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * state.range(0));
}

template <bool Parallel>
void BM_PathLossSweep(benchmark::State& state)
{
    ModelInputs in;
    in.sea.v_w = 7.7;
    std::vector<double> d;
    for (double x = 2000.0; x <= 33800.0; x += 20.0)
        d.push_back(x);
    for (auto _ : state)
        benchmark::DoNotOptimize(Parallel ? sweep(PathLossModel::DualCiMtr, in, d)
                                          : serial::sweep(PathLossModel::DualCiMtr, in, d));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * d.size()));
}

template <bool Parallel>
void BM_TwdpLogLikelihood(benchmark::State& state)
{
    const FadingModel m = Twdp{75.0, 0.222, 0.049};
    const std::vector<double> data = sample(m, static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(Parallel ? log_likelihood(m, data) : serial::log_likelihood(m, data));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * state.range(0));
}

template <bool Parallel>
void BM_TwdpSortedCdf(benchmark::State& state)
{
    const FadingModel m = Twdp{75.0, 0.222, 0.049};
    std::vector<double> data = sample(m, static_cast<std::size_t>(state.range(0)), 2);
    std::sort(data.begin(), data.end());
    for (auto _ : state)
        benchmark::DoNotOptimize(Parallel ? cdf_sorted(m, data) : serial::cdf_sorted(m, data));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * state.range(0));
}

template <bool Parallel>
void BM_SparseConvolution(benchmark::State& state)
{
    const std::vector<cplx> z = zc_sequence({65535, 1});
    const std::vector<std::size_t> lags{0, 1, 2, 3, 4, 5, 6, 7};
    const std::vector<cplx> taps(lags.size(), cplx{0.3, 0.1});
    for (auto _ : state)
        benchmark::DoNotOptimize(Parallel ? par::circular_convolve_sparse(z, lags, taps)
                                          : serial::circular_convolve_sparse(z, lags, taps));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * z.size()));
}

template <bool Parallel>
void BM_LemmaCheck(benchmark::State& state)
{
    LemmaCheckConfig cfg;
    cfg.trials = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(Parallel ? lemma_check(cfg) : serial::lemma_check(cfg));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * state.range(0));
}

BENCHMARK(BM_Sum<false>)->Arg(1 << 20);
BENCHMARK(BM_Sum<true>)->Arg(1 << 20);
BENCHMARK(BM_PathLossSweep<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PathLossSweep<true>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TwdpLogLikelihood<false>)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TwdpLogLikelihood<true>)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TwdpSortedCdf<false>)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TwdpSortedCdf<true>)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SparseConvolution<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SparseConvolution<true>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LemmaCheck<false>)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LemmaCheck<true>)->Arg(2000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
