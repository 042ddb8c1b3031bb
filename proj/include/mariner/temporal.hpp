// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

// Temporal dispersion: delay moments of a PDP and the single-slope
// exponential PDP model.

#pragma once

#include "mariner/smallscale.hpp"
#include "mariner/sparsity.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mariner {

/// Moments of the excess delay (relative to the first tap), seconds.
struct DelayStats {
    double mean_excess_delay = 0.0;
    double rms_delay_spread = 0.0;
};

DelayStats delay_stats(const PdpRecord& p);

/// ln(P_n / P_tot) = ln(p0_bar) - tau_n / gamma, fitted by ordinary least
/// squares over the positive taps (tau is excess delay).
struct ExpPdpFit {
    double p0_bar = 0.0;
    double gamma = 0.0;   ///< s; NaN when flagged
    double r2 = 0.0;
    std::size_t n_taps = 0;
    bool flagged = false;   ///< slope >= 0: the profile does not decay
    std::vector<std::string> warnings;
};

ExpPdpFit fit_exp_pdp(const PdpRecord& p);

struct ExpPdpSpec {
    double gamma = 24e-9;
    double delta_tau = 50e-9;
    int n_taps = 10;
    std::optional<FadingModel> tap_fading;   ///< multiplies each tap power
    std::uint64_t seed = 1;
};

/// Taps at k * delta_tau with powers proportional to exp(-tau / gamma),
/// optionally multiplied by a fading draw, normalized to unit total power.
/// The first-tap mean power is then fixed by the normalization:
/// p0_bar = (1 - e^{-delta_tau/gamma}) / (1 - e^{-n delta_tau/gamma}).
PdpRecord synth_exp_pdp(const ExpPdpSpec& spec);

/// Normalized first-tap mean power of a noiseless exponential profile.
double exp_pdp_first_tap(double gamma, double delta_tau, int n_taps);

} // namespace mariner
