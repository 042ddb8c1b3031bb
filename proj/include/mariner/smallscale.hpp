// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

// Small-scale fading distributions: Rician, two-wave with diffuse power
// (TWDP), Nakagami-m, lognormal, Laplace and asymmetric Laplace. Densities,
// distribution functions, samplers, maximum-likelihood fits and
// goodness-of-fit statistics.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mariner {

struct Rician {
    double s = 1.0;
    double sigma = 0.1;
};

/// k: specular-to-diffuse power ratio (linear), delta: specular balance in
/// [0, 1], sigma: diffuse power is 2 sigma^2.
struct Twdp {
    double k = 1.0;
    double delta = 0.0;
    double sigma = 0.1;
};

struct Nakagami {
    double m = 1.0;
    double omega = 1.0;
};

struct Lognormal {
    double mu = 0.0;
    double sigma = 0.1;
};

struct Laplace {
    double mu = 1.0;
    double b = 0.1;
};

struct AsymLaplace {
    double mu = 1.0;
    double b1 = 0.1;   ///< scale below mu
    double b2 = 0.1;   ///< scale above mu
};

using FadingModel = std::variant<Rician, Twdp, Nakagami, Lognormal, Laplace, AsymLaplace>;

enum class FadingFamily { Rician, Twdp, Nakagami, Lognormal, Laplace, AsymLaplace };

FadingFamily family_of(const FadingModel& m);
std::string family_name(FadingFamily f);
FadingFamily parse_family(const std::string& name);
/// Amplitude families have support [0, inf); the Laplace families live on R.
bool is_amplitude_family(FadingFamily f);

void validate(const FadingModel& m);

double pdf(const FadingModel& m, double x);
double cdf(const FadingModel& m, double x);

/// Model CDF at each of the (ascending) points. TWDP accumulates the density
/// between neighbouring points instead of integrating from zero each time.
std::vector<double> cdf_sorted(const FadingModel& m, std::span<const double> sorted_x);

/// n i.i.d. draws; TWDP draws are built from two random-phase specular waves
/// plus a complex Gaussian diffuse part.
std::vector<double> sample(const FadingModel& m, std::size_t n, std::uint64_t seed);

struct TwdpVoltages {
    double v1 = 0.0;
    double v2 = 0.0;
};

struct TwdpShape {
    double k = 0.0;
    double delta = 0.0;
};

/// K = (V1^2 + V2^2) / (2 sigma^2), Delta = 2 V1 V2 / (V1^2 + V2^2).
TwdpShape params_from_voltages(double v1, double v2, double sigma);
/// Inverse map, V1 >= V2 >= 0.
TwdpVoltages voltages_from_params(double k, double delta, double sigma);

/// K factor s^2 / (2 sigma^2) in dB.
double rician_k_db(double s, double sigma);

/// Linear amplitudes scaled to unit mean.
struct EnvelopeSamples {
    std::vector<double> values;

    static EnvelopeSamples normalized(std::vector<double> raw);
    double mean() const;
};

struct FitOptions {
    std::size_t min_samples = 30;
    int histogram_bins = 50;
    std::uint64_t seed = 7;           ///< subsampling for the TWDP multi-start
    std::size_t twdp_subsample = 4000;
};

struct FitReport {
    FadingModel model;
    double ks = 0.0;
    double pdf_rmse = 0.0;
    double loglik = 0.0;
    int histogram_bins = 50;
    std::size_t n = 0;
    bool converged = true;
    std::vector<std::string> warnings;
};

/// Maximum-likelihood fit of one family. Data are used as given; callers
/// that want unit-mean envelopes normalize first.
FitReport fit_mle(FadingFamily family, std::span<const double> data, const FitOptions& opt = {});

double log_likelihood(const FadingModel& m, std::span<const double> data);

/// Two-sided K-S distance between the empirical CDF and the model.
double ks_statistic(std::span<const double> data, const FadingModel& m);

/// RMSE between the normalized histogram (equal-width bins over [min, max])
/// and the model density at bin centres.
double pdf_rmse(std::span<const double> data, const FadingModel& m, int bins = 50);

namespace serial {
double log_likelihood(const FadingModel& m, std::span<const double> data);
std::vector<double> cdf_sorted(const FadingModel& m, std::span<const double> sorted_x);
} // namespace serial

} // namespace mariner
