// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#include "mariner/sounder.hpp"

#include "mariner/common.hpp"
#include "mariner/parallel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>

namespace mariner {

namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(p);
    }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

struct FftwFree {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};
using Buffer = std::unique_ptr<fftw_complex[], FftwFree>;

Buffer make_buffer(std::size_t n)
{
    auto* raw = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (raw == nullptr)
        throw std::bad_alloc();
    return Buffer(raw);
}

Plan make_plan(std::size_t n, fftw_complex* in, fftw_complex* out, int sign)
{
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign, FFTW_ESTIMATE);
    if (p == nullptr)
        throw SolverError("FFT planning failed");
    return Plan(p);
}

} // namespace

void ZcConfig::validate() const
{
    require(length >= 1 && length % 2 == 1, "ZC length must be odd and positive");
    require(root != 0 && std::gcd(static_cast<long long>(length), root < 0 ? -root : root) == 1,
            "ZC root must be coprime with the length");
}

std::vector<cplx> zc_sequence(const ZcConfig& cfg)
{
    cfg.validate();
    const auto len = static_cast<unsigned long long>(cfg.length);
    const auto u = static_cast<unsigned long long>(((cfg.root % static_cast<long long>(len)) + static_cast<long long>(len)) %
                                                   static_cast<long long>(len));
    std::vector<cplx> z(cfg.length);
    for (unsigned long long k = 0; k < len; ++k) {
        // k (k+1) is even, so reduce u k (k+1) / 2 modulo L exactly; the phase
        // is then -2 pi r / L with r < L
        const unsigned long long tri = (k * (k + 1) / 2) % len;
        const unsigned long long r = static_cast<unsigned long long>((static_cast<unsigned __int128>(u) * tri) % len);
        const double phase = -kTwoPi * static_cast<double>(r) / static_cast<double>(len);
        z[k] = std::polar(1.0, phase);
    }
    return z;
}

void Cir::validate() const
{
    require(delta_tau > 0.0 && std::isfinite(delta_tau), "CIR bin width must be positive");
    require(!taps.empty(), "CIR has no taps");
    for (const cplx& h : taps)
        require(std::isfinite(h.real()) && std::isfinite(h.imag()), "CIR taps must be finite");
}

Cir extract_cir(std::span<const cplx> rx, const ZcConfig& cfg, double delta_tau)
{
    cfg.validate();
    const std::size_t len = cfg.length;
    require(rx.size() >= len && rx.size() % len == 0, "received samples must span whole sequence periods");
    require(delta_tau > 0.0, "bin width must be positive");
    const std::size_t periods = rx.size() / len;

    const std::vector<cplx> z = zc_sequence(cfg);
    Buffer a = make_buffer(len);
    Buffer b = make_buffer(len);
    Buffer fa = make_buffer(len);
    Buffer fb = make_buffer(len);
    for (std::size_t k = 0; k < len; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t p = 0; p < periods; ++p)
            acc += rx[p * len + k];
        acc /= static_cast<double>(periods);
        a[k][0] = acc.real();
        a[k][1] = acc.imag();
        b[k][0] = z[k].real();
        b[k][1] = z[k].imag();
    }
    {
        Plan pa = make_plan(len, a.get(), fa.get(), FFTW_FORWARD);
        Plan pb = make_plan(len, b.get(), fb.get(), FFTW_FORWARD);
        fftw_execute(pa.get());
        fftw_execute(pb.get());
    }
    // R[l] = sum_k rx[k + l] conj(z[k])  <->  FFT(rx) * conj(FFT(z))
    for (std::size_t k = 0; k < len; ++k) {
        const cplx prod = cplx(fa[k][0], fa[k][1]) * std::conj(cplx(fb[k][0], fb[k][1]));
        fa[k][0] = prod.real();
        fa[k][1] = prod.imag();
    }
    {
        Plan inv = make_plan(len, fa.get(), a.get(), FFTW_BACKWARD);
        fftw_execute(inv.get());
    }
    Cir out;
    out.delta_tau = delta_tau;
    out.taps.resize(len);
    // one 1/L from the unnormalized inverse transform, one from the definition
    const double scale = 1.0 / (static_cast<double>(len) * static_cast<double>(len));
    for (std::size_t k = 0; k < len; ++k)
        out.taps[k] = cplx(a[k][0], a[k][1]) * scale;
    return out;
}

PdpRecord pdp_from_cir(const Cir& c)
{
    c.validate();
    PdpRecord p;
    p.delays.resize(c.taps.size());
    p.powers.resize(c.taps.size());
    for (std::size_t k = 0; k < c.taps.size(); ++k) {
        p.delays[k] = static_cast<double>(k) * c.delta_tau;
        p.powers[k] = std::norm(c.taps[k]);
    }
    return p;
}

std::vector<cplx> simulate_link(const Cir& true_cir, const ZcConfig& cfg, const LinkConfig& link)
{
    true_cir.validate();
    cfg.validate();
    require(true_cir.taps.size() <= cfg.length, "CIR is longer than the sounding sequence");
    require(link.periods >= 1, "need at least one sequence period");
    require(!std::isnan(link.snr_db) && link.snr_db != -kInf, "SNR must be a number or +inf");

    std::vector<std::size_t> lags;
    std::vector<cplx> taps;
    for (std::size_t k = 0; k < true_cir.taps.size(); ++k)
        if (true_cir.taps[k] != cplx{0.0, 0.0}) {
            lags.push_back(k);
            taps.push_back(true_cir.taps[k]);
        }
    const std::vector<cplx> z = zc_sequence(cfg);
    const std::vector<cplx> clean = par::circular_convolve_sparse(z, lags, taps);

    std::vector<cplx> rx;
    rx.reserve(clean.size() * link.periods);
    for (std::size_t p = 0; p < link.periods; ++p)
        rx.insert(rx.end(), clean.begin(), clean.end());
    if (std::isfinite(link.snr_db)) {
        const double sd = std::sqrt(0.5 * std::pow(10.0, -link.snr_db / 10.0));
        std::mt19937_64 rng(link.seed);
        std::normal_distribution<double> gauss(0.0, sd);
        for (cplx& v : rx) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            v += cplx(re, im);
        }
    }
    return rx;
}

double estimate_noise_floor(std::span<const double> powers)
{
    require(!powers.empty(), "noise floor estimate needs samples");
    std::vector<double> v(powers.begin(), powers.end());
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid / std::log(2.0);
}

cplx zc_autocorrelation(std::span<const cplx> z, std::size_t lag)
{
    const std::size_t len = z.size();
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < len; ++k)
        acc += z[(k + lag) % len] * std::conj(z[k]);
    return acc;
}

} // namespace mariner
