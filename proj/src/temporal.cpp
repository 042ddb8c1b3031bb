// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#include "mariner/temporal.hpp"

#include "mariner/common.hpp"

#include <cmath>
#include <limits>

namespace mariner {

DelayStats delay_stats(const PdpRecord& p)
{
    p.validate();
    const double t0 = p.delays.front();
    const double total = p.total_power();
    double mean = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        mean += p.powers[i] * (p.delays[i] - t0);
    mean /= total;
    // central second moment computed around the mean to avoid cancellation
    double var = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = p.delays[i] - t0 - mean;
        var += p.powers[i] * d * d;
    }
    var /= total;
    return {mean, std::sqrt(var)};
}

ExpPdpFit fit_exp_pdp(const PdpRecord& p)
{
    p.validate();
    const double t0 = p.delays.front();
    const double total = p.total_power();
    std::vector<double> x, y;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p.powers[i] > 0.0) {
            x.push_back(p.delays[i] - t0);
            y.push_back(std::log(p.powers[i] / total));
        }
    require(x.size() >= 2, "exponential PDP fit needs at least two positive taps");

    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;

    ExpPdpFit fit;
    fit.n_taps = x.size();
    fit.p0_bar = std::exp(intercept);
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    if (!(slope < 0.0)) {
        fit.flagged = true;
        fit.gamma = std::numeric_limits<double>::quiet_NaN();
        fit.warnings.push_back("profile does not decay with delay");
    } else {
        fit.gamma = -1.0 / slope;
    }
    return fit;
}

double exp_pdp_first_tap(double gamma, double delta_tau, int n_taps)
{
    require(gamma > 0.0 && delta_tau > 0.0 && n_taps >= 1, "need gamma, delta_tau > 0 and n_taps >= 1");
    const double r = delta_tau / gamma;
    return -std::expm1(-r) / -std::expm1(-r * n_taps);
}

PdpRecord synth_exp_pdp(const ExpPdpSpec& spec)
{
    require(spec.gamma > 0.0 && spec.delta_tau > 0.0 && spec.n_taps >= 1,
            "need gamma, delta_tau > 0 and n_taps >= 1");
    PdpRecord p;
    p.delays.resize(static_cast<std::size_t>(spec.n_taps));
    p.powers.resize(p.delays.size());
    std::vector<double> fade;
    if (spec.tap_fading) {
        // amplitude families scale the amplitude, so the power factor is squared
        const bool amplitude = is_amplitude_family(family_of(*spec.tap_fading));
        fade = sample(*spec.tap_fading, p.size(), spec.seed);
        for (double& v : fade) {
            v = amplitude ? v * v : v;
            require(v >= 0.0, "tap fading produced a negative power factor");
        }
    }
    double total = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        p.delays[k] = static_cast<double>(k) * spec.delta_tau;
        p.powers[k] = std::exp(-p.delays[k] / spec.gamma) * (fade.empty() ? 1.0 : fade[k]);
        total += p.powers[k];
    }
    require(total > 0.0, "synthetic PDP has no power");
    for (double& v : p.powers)
        v /= total;
    return p;
}

} // namespace mariner
