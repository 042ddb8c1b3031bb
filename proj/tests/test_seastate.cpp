// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#include "catch_amalgamated.hpp"

#include "mariner/common.hpp"
#include "mariner/seastate.hpp"

#include <cmath>

using namespace mariner;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// composite Simpson rule, used as an independent quadrature oracle
template <class F>
double simpson(F f, double a, double b, int n)
{
    if (n % 2)
        ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return acc * h / 3.0;
}

double spectrum_integral(double v_w, double lo, double hi)
{
    return simpson([&](double w) { return pm_spectrum(w, v_w); }, lo, hi, 200000);
}

} // namespace

TEST_CASE("Pierson-Moskowitz spectrum", "[seastate]")
{
    SECTION("peak location")
    {
        const double wp = pm_peak_frequency(7.7);
        CHECK_THAT(wp, WithinAbs(1.118, 0.001));
        double best_w = 0.0, best = -1.0;
        for (double w = 0.2; w < 5.0; w += 1e-5) {
            const double s = pm_spectrum(w, 7.7);
            if (s > best)
                best = s, best_w = w;
        }
        CHECK_THAT(best_w, WithinAbs(wp, 2e-5));
    }

    SECTION("limits and sign")
    {
        CHECK(pm_spectrum(1e-2, 7.7) < 1e-300);
        CHECK(pm_spectrum(1e3, 7.7) < 1e-12);
        for (double w = 0.01; w < 100.0; w *= 1.1)
            CHECK(pm_spectrum(w, 7.7) >= 0.0);
        CHECK_THROWS_AS(pm_spectrum(0.0, 7.7), DomainError);
        CHECK_THROWS_AS(pm_spectrum(1.0, 0.0), DomainError);
    }

    SECTION("closed-form variance against quadrature")
    {
        CHECK_THAT(pm_variance(7.7), WithinAbs(0.0999, 0.0001));
        for (double v : {2.0, 5.0, 7.7, 12.0, 20.0}) {
            const double wp = pm_peak_frequency(v);
            CHECK_THAT(spectrum_integral(v, 0.1 * wp, 40.0 * wp), WithinRel(pm_variance(v), 1e-3));
        }
    }

    SECTION("default band holds most of the variance")
    {
        const double wp = pm_peak_frequency(7.7);
        CHECK(spectrum_integral(7.7, 0.5 * wp, 2.5 * wp) > 0.95 * pm_variance(7.7));
    }
}

TEST_CASE("harmonic set construction", "[seastate]")
{
    WaveSpectrumConfig cfg;
    cfg.v_w = 7.7;
    cfg.seed = 77;

    SECTION("structure")
    {
        const HarmonicSet h = build_harmonics(cfg);
        REQUIRE(h.waves.size() == 5);
        const auto [lo, hi] = cfg.band();
        const double dw = (hi - lo) / 5.0;
        for (std::size_t i = 0; i < h.waves.size(); ++i) {
            const Harmonic& w = h.waves[i];
            CHECK(w.omega > lo);
            CHECK(w.omega < hi);
            if (i > 0)
                CHECK_THAT(w.omega - h.waves[i - 1].omega, WithinRel(dw, 1e-12));
            CHECK_THAT(w.amplitude, WithinRel(std::sqrt(2.0 * pm_spectrum(w.omega, 7.7) * dw), 1e-14));
            CHECK_THAT(w.period, WithinRel(2.0 * kPi / w.omega, 1e-15));
            CHECK_THAT(w.wavelength, WithinRel(2.0 * kPi * 9.81 / (w.omega * w.omega), 1e-15));
            CHECK(w.phase >= 0.0);
            CHECK(w.phase < 2.0 * kPi);
        }
    }

    SECTION("determinism")
    {
        const HarmonicSet a = build_harmonics(cfg), b = build_harmonics(cfg);
        for (std::size_t i = 0; i < a.waves.size(); ++i) {
            CHECK(a.waves[i].phase == b.waves[i].phase);
            CHECK(a.waves[i].amplitude == b.waves[i].amplitude);
        }
        WaveSpectrumConfig other = cfg;
        other.seed = 78;
        CHECK(build_harmonics(other).waves[0].phase != a.waves[0].phase);
    }

    SECTION("single harmonic")
    {
        WaveSpectrumConfig one = cfg;
        one.n_harmonics = 1;
        const HarmonicSet h = build_harmonics(one);
        REQUIRE(h.waves.size() == 1);
        const auto [lo, hi] = one.band();
        CHECK_THAT(h.waves[0].amplitude, WithinRel(std::sqrt(2.0 * pm_spectrum(h.waves[0].omega, 7.7) * (hi - lo)), 1e-14));
    }

    SECTION("dense sets reproduce the band variance")
    {
        WaveSpectrumConfig dense = cfg;
        const double wp = pm_peak_frequency(7.7);
        dense.n_harmonics = 64;
        dense.omega_lo = 0.5 * wp;
        dense.omega_hi = 3.0 * wp;
        const HarmonicSet h = build_harmonics(dense);
        double m0 = 0.0;
        for (const auto& w : h.waves)
            m0 += 0.5 * w.amplitude * w.amplitude;
        CHECK_THAT(m0, WithinRel(pm_variance(7.7), 0.10));
    }

    SECTION("invalid configuration")
    {
        WaveSpectrumConfig bad = cfg;
        bad.n_harmonics = 0;
        CHECK_THROWS_AS(build_harmonics(bad), DomainError);
        bad = cfg;
        bad.omega_lo = 2.0;
        bad.omega_hi = 1.0;
        CHECK_THROWS_AS(build_harmonics(bad), DomainError);
        bad = cfg;
        bad.v_w = 0.0;
        CHECK_THROWS_AS(build_harmonics(bad), DomainError);
    }
}

TEST_CASE("sea surface", "[seastate]")
{
    WaveSpectrumConfig cfg;
    cfg.seed = 3;
    const HarmonicSet h = build_harmonics(cfg);

    SECTION("zero amplitudes give a flat sea")
    {
        HarmonicSet flat = h;
        for (auto& w : flat.waves)
            w.amplitude = 0.0;
        for (double t = 0.0; t < 50.0; t += 0.7)
            CHECK(surface_height(flat, t, 13.0 * t) == 0.0);
    }

    SECTION("single harmonic is periodic")
    {
        HarmonicSet one;
        one.waves.push_back(h.waves[2]);
        const double T = one.waves[0].period;
        for (double t = 0.0; t < 30.0; t += 0.37)
            CHECK_THAT(surface_height(one, t + T, 4.0), WithinAbs(surface_height(one, t, 4.0), 1e-9));
        const double hand = one.waves[0].amplitude *
                            std::sin(2.0 * kPi * 1.5 / T - 2.0 * kPi * 4.0 / one.waves[0].wavelength + one.waves[0].phase);
        CHECK_THAT(surface_height(one, 1.5, 4.0), WithinAbs(hand, 1e-15));
    }

    SECTION("bounded with zero long-run mean")
    {
        double bound = 0.0, amax = 0.0;
        for (const auto& w : h.waves)
            bound += w.amplitude, amax = std::max(amax, w.amplitude);
        double acc = 0.0, peak = 0.0;
        const int n = 2000000;
        const double dt = 0.01;
        for (int i = 0; i < n; ++i) {
            const double z = surface_height(h, i * dt, 0.0);
            peak = std::max(peak, std::abs(z));
            acc += z;
        }
        CHECK(peak <= bound + 1e-12);
        CHECK(std::abs(acc / n) < 1e-3 * amax);
    }

    SECTION("significant wave height")
    {
        HarmonicSet one;
        Harmonic w;
        w.amplitude = 0.25;
        one.waves.push_back(w);
        CHECK_THAT(significant_wave_height(one), WithinAbs(0.7071, 1e-4));

        WaveSpectrumConfig dense;
        const double wp = pm_peak_frequency(7.7);
        dense.n_harmonics = 4000;
        dense.omega_lo = 0.2 * wp;
        dense.omega_hi = 10.0 * wp;
        CHECK_THAT(significant_wave_height(build_harmonics(dense)), WithinAbs(1.26, 0.01));

        double prev = 0.0;
        for (double v = 2.0; v <= 20.0; v += 1.0) {
            WaveSpectrumConfig c;
            c.v_w = v;
            const double hs = significant_wave_height(build_harmonics(c));
            CHECK(hs > prev);
            prev = hs;
        }
    }
}
