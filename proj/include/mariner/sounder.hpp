// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

// Zadoff-Chu channel sounding: sequence generation, a periodic tapped-delay
// line link with AWGN, and correlation-based CIR extraction.

#pragma once

#include "mariner/sparsity.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mariner {

using cplx = std::complex<double>;

struct ZcConfig {
    std::size_t length = 65535;   ///< odd
    long long root = 1;           ///< coprime with length

    void validate() const;
};

/// z[k] = exp(-j pi u k (k+1) / L), k = 0..L-1.
std::vector<cplx> zc_sequence(const ZcConfig& cfg);

/// Channel impulse response on a uniform delay grid.
struct Cir {
    std::vector<cplx> taps;
    double delta_tau = 50e-9;

    void validate() const;
};

/// Circular cross-correlation with the reference sequence, normalized by L.
/// Inputs spanning several periods are averaged period by period.
Cir extract_cir(std::span<const cplx> rx, const ZcConfig& cfg, double delta_tau = 50e-9);

/// Powers |h|^2 at delays k * delta_tau (every bin, including empty ones).
PdpRecord pdp_from_cir(const Cir& c);

struct LinkConfig {
    double snr_db = 30.0;   ///< per received sample; +inf disables noise
    std::size_t periods = 1;
    std::uint64_t seed = 1;
};

/// Periodic ZC transmission through the CIR plus complex white Gaussian
/// noise of variance 10^(-snr/10) against the unit-power sequence.
std::vector<cplx> simulate_link(const Cir& true_cir, const ZcConfig& cfg, const LinkConfig& link);

/// Noise power per bin from the median bin power, assuming most bins hold
/// only complex Gaussian noise (exponential power, median = mean ln 2).
double estimate_noise_floor(std::span<const double> powers);

/// Brute-force periodic autocorrelation at one lag (reference for tests).
cplx zc_autocorrelation(std::span<const cplx> z, std::size_t lag);

} // namespace mariner
