// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

// Large-scale path loss: free space, two-ray, modified two-ray (MTR) with
// sea-surface divergence/shadowing/roughness factors, close-in (CI),
// dual-slope CI and the dual-slope CI-MTR model.
//
// All evaluators are deterministic means. Shadow fading is drawn separately
// by sample_shadowing().

#pragma once

#include "mariner/common.hpp"
#include "mariner/geometry.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace mariner {

/// How the divergence factor is evaluated. InverseSqrt is the spherical-Earth
/// form [1 + 2 d1 d2 / (R (h_t + h_r))]^(-1/2); AsPrinted drops the exponent.
enum class DivergenceForm { InverseSqrt, AsPrinted };

/// Reflected-ray phase. Corrected uses 2 pi dd / lambda; AsPrinted uses
/// 2 pi dd / (lambda d).
enum class PhaseForm { Corrected, AsPrinted };

struct SeaStateParams {
    double v_w = 0.0;                               ///< wind speed [m/s]
    std::complex<double> gamma_refl{-1.0, 0.0};     ///< sea reflection coefficient
    DivergenceForm divergence = DivergenceForm::InverseSqrt;
    PhaseForm phase = PhaseForm::Corrected;

    void validate() const;
};

struct MtrFactors {
    double divergence = 1.0;  ///< D
    double shadowing = 1.0;   ///< S
    double roughness = 1.0;   ///< R
    double phase = 0.0;       ///< reflected-ray phase [rad]
    double beta0 = 0.0;       ///< RMS sea slope
    double sigma_s = 0.0;     ///< sea height standard deviation [m]
};

struct CiParams {
    double n = 2.0;
    double d0 = 1.0;
    double sigma_sf = 0.0;
};

struct DualSlopeParams {
    double n1 = 2.0;
    double n2 = 2.0;
    double d_break = 1.0;
    double sigma_sf = 0.0;
    double d0 = 1.0;
};

double fspl(double f, double d);

LossDb two_ray_simplified(const LinkGeometry& g);

/// RMS sea slope from wind speed.
double rms_sea_slope(double v_w);
/// Sea height standard deviation from wind speed.
double sea_height_sigma(double v_w);

/// Wave shadowing factor at grazing angle theta for RMS slope beta0.
double shadowing_factor(double grazing_angle, double beta0);
/// Miller-Brown roughness factor.
double roughness_factor(double grazing_angle, double sigma_s, double lambda);

MtrFactors mtr_factors(const LinkGeometry& g, const SeaStateParams& sea, double h_t_eff, double h_r_eff);
inline MtrFactors mtr_factors(const LinkGeometry& g, const SeaStateParams& sea)
{
    return mtr_factors(g, sea, g.h_t, g.h_r);
}

/// 20 log10 of (4 pi d / lambda) / |1 + D S R Gamma e^{-j phase}| with the
/// given factors. This is the building block for all MTR-type models.
LossDb mtr_loss_from_factors(const LinkGeometry& g, std::complex<double> gamma, const MtrFactors& m);

LossDb mtr_path_loss(const LinkGeometry& g, const SeaStateParams& sea);
LossDb mtr_path_loss(const LinkGeometry& g, const SeaStateParams& sea, double h_t_eff, double h_r_eff);

/// Throws DomainError if d < d0.
double ci_path_loss(const CiParams& p, double f, double d);

double dual_ci_path_loss(const DualSlopeParams& p, double f, double d);

/// 10 log10 { 4 pi f d / (c |1 + D S R Gamma e^{-j phase}|) } at distance d,
/// i.e. half of the MTR loss. The dual-slope CI-MTR model is linear in its two
/// exponents over this term.
LossDb mtr_log_term(const LinkGeometry& g, const SeaStateParams& sea, double d);

LossDb dual_ci_mtr_path_loss(const DualSlopeParams& p, const LinkGeometry& g, const SeaStateParams& sea, double d);

double received_power(double p_tx_dbm, double pl_db, double x_swift_db, double x_small_db);

/// Adds zero-mean Gaussian shadow fading of the given sigma (dB) to a vector
/// of deterministic losses. Null entries are left untouched.
std::vector<double> sample_shadowing(std::span<const double> losses_db, double sigma_db, std::uint64_t seed);

enum class PathLossModel { FreeSpace, TwoRay, Mtr, Ci, DualCi, DualCiMtr };

PathLossModel parse_path_loss_model(const std::string& name);

struct ModelInputs {
    LinkGeometry geometry;
    SeaStateParams sea;
    CiParams ci;
    DualSlopeParams dual;
};

/// Evaluates one model over a set of distances (OpenMP kernel).
std::vector<LossDb> sweep(PathLossModel model, const ModelInputs& in, std::span<const double> distances);

namespace serial {
std::vector<LossDb> sweep(PathLossModel model, const ModelInputs& in, std::span<const double> distances);
}

} // namespace mariner
