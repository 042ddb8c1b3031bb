// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#include "catch_amalgamated.hpp"

#include "mariner/common.hpp"
#include "mariner/io.hpp"
#include "mariner/parallel.hpp"
#include "mariner/sounder.hpp"
#include "mariner/sparsity.hpp"
#include "mariner/temporal.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <numeric>
#include <random>

using namespace mariner;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Phase reduced with exact integer arithmetic before the trig call.
cplx zc_oracle(std::size_t k, long long u, std::size_t len)
{
    const unsigned long long two_l = 2ULL * len;
    const unsigned long long uu = static_cast<unsigned long long>(((u % static_cast<long long>(two_l)) + two_l) % two_l);
    const unsigned long long q = ((k % two_l) * ((k + 1) % two_l)) % two_l * uu % two_l;
    const long double ph = -std::numbers::pi_v<long double> * static_cast<long double>(q) / len;
    return {static_cast<double>(std::cos(ph)), static_cast<double>(std::sin(ph))};
}

// O(L^2) circular cross-correlation, normalized by L.
std::vector<cplx> xcorr_oracle(const std::vector<cplx>& rx, const std::vector<cplx>& z)
{
    const std::size_t len = z.size();
    std::vector<cplx> r(len);
    for (std::size_t l = 0; l < len; ++l) {
        std::complex<long double> acc{0, 0};
        for (std::size_t k = 0; k < len; ++k)
            acc += std::complex<long double>(rx[(k + l) % len]) * std::conj(std::complex<long double>(z[k]));
        r[l] = cplx(static_cast<double>(acc.real() / len), static_cast<double>(acc.imag() / len));
    }
    return r;
}

std::vector<cplx> convolve_oracle(const std::vector<cplx>& z, const std::vector<cplx>& h)
{
    const std::size_t len = z.size();
    std::vector<cplx> y(len);
    for (std::size_t k = 0; k < len; ++k)
        for (std::size_t j = 0; j < h.size(); ++j)
            y[k] += h[j] * z[(k + len - j % len) % len];
    return y;
}

} // namespace

TEST_CASE("Zadoff-Chu sequence", "[sounder]")
{
    for (std::size_t len : {63u, 255u, 65535u}) {
        for (long long u : {1LL, 2LL, 7LL, -4LL}) {
            if (std::gcd(u, static_cast<long long>(len)) != 1)
                continue;
            const std::vector<cplx> z = zc_sequence({len, u});
            REQUIRE(z.size() == len);
            double worst = 0.0;
            for (std::size_t k = 0; k < len; ++k) {
                worst = std::max(worst, std::abs(z[k] - zc_oracle(k, u, len)));
                CHECK_THAT(std::abs(z[k]), WithinAbs(1.0, 1e-14));
            }
            CHECK(worst < 1e-9);
        }
    }
    CHECK_THROWS_AS(zc_sequence({255, 5}), DomainError);
    CHECK_THROWS_AS(zc_sequence({64, 1}), DomainError);
    CHECK_THROWS_AS(zc_sequence({0, 1}), DomainError);
}

TEST_CASE("periodic autocorrelation", "[sounder]")
{
    for (std::size_t len : {63u, 255u}) {
        for (long long u : {1LL, 2LL, 11LL}) {
            if (std::gcd(u, static_cast<long long>(len)) != 1)
                continue;
            const std::vector<cplx> z = zc_sequence({len, u});
            CHECK_THAT(std::abs(zc_autocorrelation(z, 0)), WithinAbs(static_cast<double>(len), 1e-9));
            for (std::size_t lag = 1; lag < len; ++lag)
                CHECK(std::abs(zc_autocorrelation(z, lag)) < 1e-9 * len);
        }
    }
    // full-length sequence: the transform-domain correlation of a clean period
    const ZcConfig big{65535, 1};
    const Cir c = extract_cir(zc_sequence(big), big);
    CHECK_THAT(std::abs(c.taps[0] - cplx(1.0, 0.0)), WithinAbs(0.0, 1e-9));
    double off = 0.0;
    for (std::size_t k = 1; k < c.taps.size(); ++k)
        off = std::max(off, std::abs(c.taps[k]));
    CHECK(off < 1e-9);
}

TEST_CASE("CIR extraction", "[sounder]")
{
    const ZcConfig cfg{255, 1};
    const std::vector<cplx> z = zc_sequence(cfg);

    SECTION("delta, shift and scaling")
    {
        Cir c = extract_cir(z, cfg);
        CHECK(std::abs(c.taps[0] - 1.0) < 1e-9);
        for (std::size_t k = 1; k < c.taps.size(); ++k)
            CHECK(std::abs(c.taps[k]) < 1e-9);

        std::vector<cplx> shifted(z.size());
        for (std::size_t k = 0; k < z.size(); ++k)
            shifted[(k + 3) % z.size()] = 0.5 * z[k];
        c = extract_cir(shifted, cfg);
        CHECK(std::abs(c.taps[3] - 0.5) < 1e-9);
        CHECK(c.delta_tau == 50e-9);
    }

    SECTION("two taps against direct convolution and correlation")
    {
        std::vector<cplx> h(6);
        h[0] = 1.0;
        h[5] = 0.3 * std::polar(1.0, std::numbers::pi / 4.0);
        const std::vector<cplx> rx = convolve_oracle(z, h);
        const Cir c = extract_cir(rx, cfg);
        const std::vector<cplx> ref = xcorr_oracle(rx, z);
        for (std::size_t k = 0; k < c.taps.size(); ++k) {
            CHECK(std::abs(c.taps[k] - ref[k]) < 1e-12);
            const cplx want = k < h.size() ? h[k] : cplx{};
            CHECK(std::abs(c.taps[k] - want) < 1e-9);
        }
    }

    SECTION("random channel and noise against the quadratic correlation")
    {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> g(0.0, 1.0);
        std::vector<cplx> rx(z.size());
        for (cplx& v : rx)
            v = {g(rng), g(rng)};
        const Cir c = extract_cir(rx, cfg);
        const std::vector<cplx> ref = xcorr_oracle(rx, z);
        for (std::size_t k = 0; k < ref.size(); ++k)
            CHECK(std::abs(c.taps[k] - ref[k]) < 1e-12);
    }

    SECTION("multi-period averaging")
    {
        std::vector<cplx> rx;
        for (int p = 0; p < 3; ++p)
            rx.insert(rx.end(), z.begin(), z.end());
        rx[7] += cplx(3.0, 0.0);   // one period perturbed
        std::vector<cplx> avg(z);
        avg[7] += 1.0;
        const Cir a = extract_cir(rx, cfg);
        const std::vector<cplx> ref = xcorr_oracle(avg, z);
        for (std::size_t k = 0; k < ref.size(); ++k)
            CHECK(std::abs(a.taps[k] - ref[k]) < 1e-12);
    }

    CHECK_THROWS_AS(extract_cir(std::vector<cplx>(254), cfg), DomainError);
    CHECK_THROWS_AS(extract_cir(std::vector<cplx>(300), cfg), DomainError);
    CHECK_THROWS_AS(extract_cir(z, cfg, 0.0), DomainError);
}

TEST_CASE("PDP from a CIR", "[sounder]")
{
    Cir unit;
    unit.taps = {cplx(0.0, 1.0)};
    const PdpRecord one = pdp_from_cir(unit);
    REQUIRE(one.size() == 1);
    CHECK(one.powers[0] == 1.0);

    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    Cir c;
    c.taps.resize(40);
    long double energy = 0;
    for (cplx& h : c.taps) {
        h = {g(rng), g(rng)};
        energy += std::norm(std::complex<long double>(h));
    }
    const PdpRecord p = pdp_from_cir(c);
    CHECK_THAT(p.total_power(), WithinRel(static_cast<double>(energy), 1e-13));
    for (std::size_t k = 0; k < p.size(); ++k)
        CHECK_THAT(p.delays[k], WithinAbs(k * 50e-9, 1e-20));

    // sounder bins at 50 ns are already on the coarsening grid
    const PdpRecord q = coarsen_pdp(p, 50e-9);
    CHECK(q.powers == p.powers);
    for (std::size_t k = 0; k < p.size(); ++k)
        CHECK_THAT(q.delays[k], WithinAbs(p.delays[k], 1e-20));
    // and two-bin coarsening pairs neighbours
    const PdpRecord r = coarsen_pdp(p, 100e-9);
    CHECK_THAT(r.powers[1], WithinRel(p.powers[1] + p.powers[2], 1e-15));

    Cir bad;
    CHECK_THROWS_AS(pdp_from_cir(bad), DomainError);
    bad.taps = {cplx(std::nan(""), 0.0)};
    CHECK_THROWS_AS(pdp_from_cir(bad), DomainError);
}

TEST_CASE("link simulation", "[sounder]")
{
    const ZcConfig cfg{255, 2};
    const std::vector<cplx> z = zc_sequence(cfg);
    LinkConfig clean;
    clean.snr_db = kInf;

    Cir ident;
    ident.taps = {1.0};
    CHECK(simulate_link(ident, cfg, clean) == z);

    Cir h;
    h.taps = {0.8, 0.0, cplx(0.1, -0.3), 0.0, 0.0, cplx(0.0, 0.05)};
    const std::vector<cplx> rx = simulate_link(h, cfg, clean);
    const std::vector<cplx> ref = convolve_oracle(z, h.taps);
    for (std::size_t k = 0; k < rx.size(); ++k)
        CHECK(std::abs(rx[k] - ref[k]) < 1e-13);
    const Cir back = extract_cir(rx, cfg);
    for (std::size_t k = 0; k < back.taps.size(); ++k)
        CHECK(std::abs(back.taps[k] - (k < h.taps.size() ? h.taps[k] : cplx{})) < 1e-9);

    LinkConfig noisy;
    noisy.snr_db = 10.0;
    noisy.periods = 4;
    noisy.seed = 9;
    const std::vector<cplx> a = simulate_link(h, cfg, noisy);
    CHECK(a.size() == 4 * z.size());
    CHECK(simulate_link(h, cfg, noisy) == a);
    noisy.seed = 10;
    CHECK(simulate_link(h, cfg, noisy) != a);

    SECTION("noise variance")
    {
        LinkConfig n;
        n.snr_db = 3.0;
        n.periods = 200;
        Cir zero;
        zero.taps = {0.0};
        const std::vector<cplx> w = simulate_link(zero, cfg, n);
        double acc = 0.0;
        for (const cplx& v : w)
            acc += std::norm(v);
        // 51000 exponential draws: relative standard error 0.44 %
        CHECK_THAT(acc / w.size(), WithinRel(std::pow(10.0, -0.3), 0.02));
    }

    SECTION("noise floor estimator")
    {
        std::mt19937_64 rng(1);
        std::exponential_distribution<double> e(1.0 / 2.5e-4);
        std::vector<double> pw(100001);
        for (double& v : pw)
            v = e(rng);
        CHECK_THAT(estimate_noise_floor(pw), WithinRel(2.5e-4, 0.02));
        CHECK_THROWS_AS(estimate_noise_floor(std::vector<double>{}), DomainError);
    }

    Cir too_long;
    too_long.taps.assign(256, 0.1);
    CHECK_THROWS_AS(simulate_link(too_long, cfg, clean), DomainError);
    LinkConfig zero_periods;
    zero_periods.periods = 0;
    CHECK_THROWS_AS(simulate_link(h, cfg, zero_periods), DomainError);
}

TEST_CASE("sparse circular convolution kernels agree", "[sounder][parallel]")
{
    const std::vector<cplx> z = zc_sequence({65535, 1});
    const std::vector<std::size_t> lags{0, 1, 7, 300, 65534};
    const std::vector<cplx> taps{1.0, cplx(0.2, 0.1), cplx(-0.3, 0.0), cplx(0.0, 0.01), 0.5};
    const auto a = par::circular_convolve_sparse(z, lags, taps);
    const auto b = serial::circular_convolve_sparse(z, lags, taps);
    CHECK(a == b);
}

TEST_CASE("end-to-end sounding at full length", "[sounder]")
{
    const ZcConfig cfg{65535, 1};
    const double gamma = 24e-9;
    ExpPdpSpec spec;
    spec.gamma = gamma;
    spec.n_taps = 10;
    const PdpRecord mean = synth_exp_pdp(spec);
    Cir h;
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
    for (double p : mean.powers)
        h.taps.push_back(std::polar(std::sqrt(p), ph(rng)));

    LinkConfig link;
    link.snr_db = 30.0;

    int gamma_ok = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        link.seed = seed;
        const Cir est = extract_cir(simulate_link(h, cfg, link), cfg);
        const PdpRecord pdp = pdp_from_cir(est);
        // noise per bin is 10^-3 / L, far below the first taps
        for (std::size_t k = 0; k < 4; ++k) {
            const double err_db = 10.0 * std::log10(pdp.powers[k] / mean.powers[k]);
            CHECK(std::abs(err_db) < 0.5);
        }
        const double floor = estimate_noise_floor(pdp.powers);
        CHECK_THAT(floor, WithinRel(1e-3 / 65535.0, 0.1));
        // 65535 noise bins: a 6 dB margin passes e^-4 of them, 20 dB passes none
        const PdpRecord mpc = mpc_extract(pdp, floor, 20.0);
        CHECK(mpc.size() >= 5);
        const ExpPdpFit fit = fit_exp_pdp(mpc);
        gamma_ok += std::abs(fit.gamma / gamma - 1.0) <= 0.10 ? 1 : 0;
    }
    CHECK(gamma_ok == 5);
}

TEST_CASE("MCIQ1 round trip", "[sounder][io]")
{
    const auto path = std::filesystem::temp_directory_path() / "mariner_sounder_test.iq";
    std::vector<cplx> s = zc_sequence({63, 1});
    s.push_back({-0.0, 1e-300});
    io::write_iq(path, s);
    CHECK(io::read_iq(path) == s);
    const std::string bytes = io::read_text(path);
    CHECK(bytes.substr(0, 5) == "MCIQ1");
    CHECK(bytes.size() == 16 + 16 * s.size());
    std::filesystem::remove(path);
}
