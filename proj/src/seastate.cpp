// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#include "mariner/seastate.hpp"

#include "mariner/common.hpp"

#include <cmath>
#include <random>

namespace mariner {

void WaveSpectrumConfig::validate() const
{
    require(std::isfinite(v_w) && v_w > 0.0, "wind speed must be positive for a wave spectrum");
    require(n_harmonics >= 1, "need at least one harmonic");
    const auto [lo, hi] = band();
    require(lo > 0.0 && lo < hi, "frequency band must satisfy 0 < omega_lo < omega_hi");
}

std::pair<double, double> WaveSpectrumConfig::band() const
{
    if (omega_lo == 0.0 && omega_hi == 0.0) {
        const double wp = pm_peak_frequency(v_w);
        return {0.5 * wp, 2.5 * wp};
    }
    return {omega_lo, omega_hi};
}

double pm_spectrum(double omega, double v_w)
{
    require(omega > 0.0 && v_w > 0.0, "P-M spectrum needs positive frequency and wind speed");
    const double r = kGravity / (v_w * omega);
    return kPmAlpha * kGravity * kGravity / std::pow(omega, 5) * std::exp(-kPmBeta * r * r * r * r);
}

double pm_peak_frequency(double v_w)
{
    require(v_w > 0.0, "wind speed must be positive");
    return kGravity / v_w * std::pow(0.8 * kPmBeta, 0.25);
}

double pm_variance(double v_w)
{
    return kPmAlpha * std::pow(v_w, 4) / (4.0 * kPmBeta * kGravity * kGravity);
}

double deep_water_wavelength(double omega) { return kTwoPi * kGravity / (omega * omega); }

HarmonicSet build_harmonics(const WaveSpectrumConfig& cfg)
{
    cfg.validate();
    const auto [lo, hi] = cfg.band();
    const double dw = (hi - lo) / cfg.n_harmonics;

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);

    HarmonicSet set;
    set.waves.reserve(static_cast<std::size_t>(cfg.n_harmonics));
    for (int i = 0; i < cfg.n_harmonics; ++i) {
        Harmonic w;
        w.omega = lo + (i + 0.5) * dw;   // bin midpoints
        w.amplitude = std::sqrt(2.0 * pm_spectrum(w.omega, cfg.v_w) * dw);
        w.period = kTwoPi / w.omega;
        w.wavelength = deep_water_wavelength(w.omega);
        w.phase = phase(rng);
        set.waves.push_back(w);
    }
    return set;
}

double surface_height(const HarmonicSet& h, double t, double x)
{
    double z = 0.0;
    for (const Harmonic& w : h.waves)
        z += w.amplitude * std::sin(kTwoPi * t / w.period - kTwoPi * x / w.wavelength + w.phase);
    return z;
}

double significant_wave_height(const HarmonicSet& h)
{
    double m0 = 0.0;
    for (const Harmonic& w : h.waves)
        m0 += 0.5 * w.amplitude * w.amplitude;
    return 4.0 * std::sqrt(m0);
}

} // namespace mariner
