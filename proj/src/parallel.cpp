// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#include "mariner/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace mariner {

int configured_threads()
{
    const char* env = std::getenv("MARINER_CHAN_THREADS");
    if (env == nullptr)
        return 0;
    try {
        const int n = std::stoi(env);
        return n > 0 ? n : 0;
    } catch (const std::exception&) {
        return 0;
    }
}

void apply_thread_limit()
{
    if (const int n = configured_threads(); n > 0)
        omp_set_num_threads(n);
}

namespace {

std::size_t block_count(std::size_t n) { return (n + kReductionBlock - 1) / kReductionBlock; }

double block_sum(std::size_t b, std::size_t n, const std::function<double(std::size_t)>& term)
{
    const std::size_t lo = b * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
        acc += term(i);
    return acc;
}

} // namespace

namespace par {

double sum(std::size_t n, const std::function<double(std::size_t)>& term)
{
    const auto nb = static_cast<std::ptrdiff_t>(block_count(n));
    std::vector<double> partial(static_cast<std::size_t>(nb), 0.0);
    ErrorSlot err;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < nb; ++b)
        err.guard([&] { partial[static_cast<std::size_t>(b)] = block_sum(static_cast<std::size_t>(b), n, term); });
    err.rethrow();
    double acc = 0.0;
    for (double p : partial)
        acc += p;
    return acc;
}

void map(std::span<const double> xs, std::span<double> out, const std::function<double(double)>& f)
{
    const auto n = static_cast<std::ptrdiff_t>(xs.size());
    ErrorSlot err;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        err.guard([&] { out[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)]); });
    err.rethrow();
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& task)
{
    const auto m = static_cast<std::ptrdiff_t>(n);
    ErrorSlot err;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < m; ++i)
        err.guard([&] { task(static_cast<std::size_t>(i)); });
    err.rethrow();
}

std::vector<std::complex<double>> circular_convolve_sparse(std::span<const std::complex<double>> x,
                                                           std::span<const std::size_t> lags,
                                                           std::span<const std::complex<double>> taps)
{
    const std::size_t len = x.size();
    std::vector<std::complex<double>> y(len);
    const auto n = static_cast<std::ptrdiff_t>(len);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t j = 0; j < taps.size(); ++j) {
            const std::size_t lag = lags[j] % len;
            const std::size_t src = (static_cast<std::size_t>(k) + len - lag) % len;
            acc += taps[j] * x[src];
        }
        y[static_cast<std::size_t>(k)] = acc;
    }
    return y;
}

} // namespace par

namespace serial {

double sum(std::size_t n, const std::function<double(std::size_t)>& term)
{
    double acc = 0.0;
    for (std::size_t b = 0; b < block_count(n); ++b)
        acc += block_sum(b, n, term);
    return acc;
}

void map(std::span<const double> xs, std::span<double> out, const std::function<double(double)>& f)
{
    for (std::size_t i = 0; i < xs.size(); ++i)
        out[i] = f(xs[i]);
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& task)
{
    for (std::size_t i = 0; i < n; ++i)
        task(i);
}

std::vector<std::complex<double>> circular_convolve_sparse(std::span<const std::complex<double>> x,
                                                           std::span<const std::size_t> lags,
                                                           std::span<const std::complex<double>> taps)
{
    const std::size_t len = x.size();
    std::vector<std::complex<double>> y(len);
    for (std::size_t j = 0; j < taps.size(); ++j) {
        const std::size_t lag = lags[j] % len;
        for (std::size_t k = 0; k < len; ++k)
            y[(k + lag) % len] += taps[j] * x[k];
    }
    return y;
}

} // namespace serial

} // namespace mariner
