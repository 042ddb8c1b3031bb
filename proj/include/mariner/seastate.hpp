// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

// Pierson-Moskowitz sea spectrum and a long-crested sea surface built from a
// finite set of harmonics with equally spaced frequencies.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace mariner {

inline constexpr double kPmAlpha = 8.1e-3;
inline constexpr double kPmBeta = 0.74;

struct WaveSpectrumConfig {
    double v_w = 7.7;             ///< wind speed [m/s]
    int n_harmonics = 5;
    double omega_lo = 0.0;        ///< [rad/s]; 0 selects the default band
    double omega_hi = 0.0;
    std::uint64_t seed = 1;

    void validate() const;
    /// Band actually used: [0.5, 2.5] x peak frequency when left at 0.
    std::pair<double, double> band() const;
};

struct Harmonic {
    double amplitude = 0.0;   ///< [m]
    double omega = 0.0;       ///< [rad/s]
    double period = 0.0;      ///< [s]
    double wavelength = 0.0;  ///< deep-water dispersion [m]
    double phase = 0.0;       ///< [rad], in [0, 2 pi)
};

struct HarmonicSet {
    std::vector<Harmonic> waves;
};

/// One-sided P-M spectral density S(omega) [m^2 s].
double pm_spectrum(double omega, double v_w);

/// Angular frequency of the spectral peak.
double pm_peak_frequency(double v_w);

/// Closed-form zeroth moment a0 v^4 / (4 beta g^2).
double pm_variance(double v_w);

/// Deep-water wavelength 2 pi g / omega^2.
double deep_water_wavelength(double omega);

HarmonicSet build_harmonics(const WaveSpectrumConfig& cfg);

double surface_height(const HarmonicSet& h, double t, double x);

/// 4 sqrt(sum A_i^2 / 2)
double significant_wave_height(const HarmonicSet& h);

} // namespace mariner
