// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

// OpenMP kernels shared by the analysis modules. Every kernel has a serial
// twin in mariner::serial that is kept as the reference implementation for
// tests and for the benchmark target.
//
// Reductions are blocked with a fixed block size and the partial sums are
// combined in block order, so results are bit-identical for any thread count.

#pragma once

#include <complex>
#include <cstddef>
#include <exception>
#include <functional>
#include <span>
#include <vector>

namespace mariner {

/// Worker cap from MARINER_CHAN_THREADS (unset or invalid -> OpenMP default).
int configured_threads();

/// Applies configured_threads() to the OpenMP runtime. Idempotent.
void apply_thread_limit();

inline constexpr std::size_t kReductionBlock = 4096;

/// Exceptions must not leave an OpenMP region. Loop bodies run through
/// guard(); the first captured exception is rethrown after the loop.
class ErrorSlot {
public:
    template <typename F>
    void guard(F&& body) noexcept
    {
        try {
            body();
        } catch (...) {
#pragma omp critical(mariner_error_slot)
            if (!error_)
                error_ = std::current_exception();
        }
    }

    void rethrow() const
    {
        if (error_)
            std::rethrow_exception(error_);
    }

private:
    std::exception_ptr error_;
};

namespace par {

/// Deterministic blocked sum of term(i) for i in [0, n).
double sum(std::size_t n, const std::function<double(std::size_t)>& term);

/// out[i] = f(xs[i])
void map(std::span<const double> xs, std::span<double> out, const std::function<double(double)>& f);

/// Runs task(i) for i in [0, n) with dynamic scheduling. Tasks must not share
/// mutable state.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& task);

/// Circular convolution of a dense sequence with a sparse tap list:
/// y[k] = sum_j taps[j] * x[(k - lag[j]) mod L].
std::vector<std::complex<double>> circular_convolve_sparse(std::span<const std::complex<double>> x,
                                                           std::span<const std::size_t> lags,
                                                           std::span<const std::complex<double>> taps);

} // namespace par

namespace serial {

double sum(std::size_t n, const std::function<double(std::size_t)>& term);
void map(std::span<const double> xs, std::span<double> out, const std::function<double(double)>& f);
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& task);
std::vector<std::complex<double>> circular_convolve_sparse(std::span<const std::complex<double>> x,
                                                           std::span<const std::size_t> lags,
                                                           std::span<const std::complex<double>> taps);

} // namespace serial

} // namespace mariner
