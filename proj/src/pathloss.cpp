// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#include "mariner/pathloss.hpp"

#include "mariner/parallel.hpp"
#include "mariner/special.hpp"

#include <cmath>
#include <random>
#include <string>

namespace mariner {

namespace {

constexpr double kNullTolerance = 1e-12;

} // namespace

void SeaStateParams::validate() const
{
    require(std::isfinite(v_w) && v_w >= 0.0, "wind speed must be >= 0");
    require(std::abs(gamma_refl) <= 1.0 + 1e-12, "|reflection coefficient| must be <= 1");
}

double fspl(double f, double d)
{
    require(f > 0.0 && d > 0.0, "free-space loss needs positive frequency and distance");
    return db20(4.0 * kPi * f * d / kSpeedOfLight);
}

LossDb two_ray_simplified(const LinkGeometry& g)
{
    g.validate();
    const double lambda = wavelength(g);
    const double s = std::sin(kTwoPi * g.h_t * g.h_r / (lambda * g.d));
    if (std::abs(s) <= kNullTolerance)
        return LossDb::at_null();
    return {db20((4.0 * kPi * g.d / lambda) / (2.0 * std::abs(s))), false};
}

double rms_sea_slope(double v_w) { return 0.003 + 0.00512 * v_w; }

double sea_height_sigma(double v_w) { return 0.0051 * v_w * v_w; }

double shadowing_factor(double grazing_angle, double beta0)
{
    require(beta0 > 0.0, "RMS sea slope must be positive");
    const double t = std::tan(grazing_angle);
    if (t <= 0.0)
        return 0.0;
    const double x = t / (std::sqrt(2.0) * beta0);
    const double lambda_fn = 0.5 * (std::sqrt(2.0 / kPi) * beta0 / t * std::exp(-x * x) - std::erfc(x));
    return (1.0 - 0.5 * std::erfc(t / std::sqrt(2.0 * beta0))) / (lambda_fn + 1.0);
}

double roughness_factor(double grazing_angle, double sigma_s, double lambda)
{
    const double a = 4.0 * kPi * sigma_s * std::sin(grazing_angle);
    const double z = a * a / (2.0 * lambda * lambda);
    // exp(-z) I0(z) == exp(-|z|) I0(|z|); I0 is even
    return special::bessel_i0e(z);
}

MtrFactors mtr_factors(const LinkGeometry& g, const SeaStateParams& sea, double h_t_eff, double h_r_eff)
{
    g.validate();
    sea.validate();
    const double lambda = wavelength(g);
    const ReflectionGeometry rg = reflection_geometry(g, h_t_eff, h_r_eff);

    MtrFactors m;
    m.beta0 = rms_sea_slope(sea.v_w);
    m.sigma_s = sea_height_sigma(sea.v_w);

    const double spread = 1.0 + 2.0 * rg.d1 * rg.d2 / (g.effective_radius() * (h_t_eff + h_r_eff));
    m.divergence = sea.divergence == DivergenceForm::InverseSqrt ? 1.0 / std::sqrt(spread) : spread;
    m.shadowing = shadowing_factor(rg.grazing_angle, m.beta0);
    m.roughness = roughness_factor(rg.grazing_angle, m.sigma_s, lambda);
    m.phase = sea.phase == PhaseForm::Corrected ? kTwoPi * rg.delta_d / lambda
                                                : kTwoPi * rg.delta_d / (lambda * g.d);
    return m;
}

LossDb mtr_loss_from_factors(const LinkGeometry& g, std::complex<double> gamma, const MtrFactors& m)
{
    const double lambda = wavelength(g);
    const std::complex<double> refl = m.divergence * m.shadowing * m.roughness * gamma * std::polar(1.0, -m.phase);
    const double mag = std::abs(1.0 + refl);
    if (mag <= kNullTolerance)
        return LossDb::at_null();
    return {db20((4.0 * kPi * g.d / lambda) / mag), false};
}

LossDb mtr_path_loss(const LinkGeometry& g, const SeaStateParams& sea)
{
    return mtr_path_loss(g, sea, g.h_t, g.h_r);
}

LossDb mtr_path_loss(const LinkGeometry& g, const SeaStateParams& sea, double h_t_eff, double h_r_eff)
{
    return mtr_loss_from_factors(g, sea.gamma_refl, mtr_factors(g, sea, h_t_eff, h_r_eff));
}

double ci_path_loss(const CiParams& p, double f, double d)
{
    require(p.n > 0.0 && p.d0 > 0.0, "CI model needs n > 0 and d0 > 0");
    require(d >= p.d0, "CI model is defined for d >= d0");
    return fspl(f, p.d0) + 10.0 * p.n * std::log10(d / p.d0);
}

double dual_ci_path_loss(const DualSlopeParams& p, double f, double d)
{
    require(p.n1 > 0.0 && p.n2 > 0.0 && p.d_break > 0.0, "dual-slope CI needs positive exponents and break distance");
    require(d >= p.d0, "dual-slope CI is defined for d >= d0");
    const double anchor = fspl(f, p.d0);
    if (d <= p.d_break)
        return anchor + 10.0 * p.n1 * std::log10(d / p.d0);
    return anchor + 10.0 * p.n1 * std::log10(p.d_break / p.d0) + 10.0 * p.n2 * std::log10(d / p.d_break);
}

LossDb mtr_log_term(const LinkGeometry& g, const SeaStateParams& sea, double d)
{
    const LossDb full = mtr_path_loss(g.at_distance(d), sea);
    if (full.null)
        return full;
    return {0.5 * full.db, false};
}

LossDb dual_ci_mtr_path_loss(const DualSlopeParams& p, const LinkGeometry& g, const SeaStateParams& sea, double d)
{
    require(d > 0.0, "distance must be positive");
    require(p.d_break > 0.0, "break distance must be positive");
    if (d <= p.d_break) {
        const LossDb x = mtr_log_term(g, sea, d);
        return x.null ? x : LossDb{p.n1 * x.db, false};
    }
    const LossDb anchor = mtr_log_term(g, sea, p.d_break);
    if (anchor.null)
        return anchor;
    return {p.n1 * anchor.db + 10.0 * p.n2 * std::log10(d / p.d_break), false};
}

double received_power(double p_tx_dbm, double pl_db, double x_swift_db, double x_small_db)
{
    return p_tx_dbm - pl_db - x_swift_db - x_small_db;
}

std::vector<double> sample_shadowing(std::span<const double> losses_db, double sigma_db, std::uint64_t seed)
{
    require(sigma_db >= 0.0, "shadow fading sigma must be >= 0");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> out(losses_db.begin(), losses_db.end());
    for (double& v : out) {
        const double z = gauss(rng);
        if (std::isfinite(v))
            v += sigma_db * z;
    }
    return out;
}

PathLossModel parse_path_loss_model(const std::string& name)
{
    if (name == "fs" || name == "fspl" || name == "free-space")
        return PathLossModel::FreeSpace;
    if (name == "two-ray")
        return PathLossModel::TwoRay;
    if (name == "mtr")
        return PathLossModel::Mtr;
    if (name == "ci")
        return PathLossModel::Ci;
    if (name == "dual-ci")
        return PathLossModel::DualCi;
    if (name == "dual-ci-mtr")
        return PathLossModel::DualCiMtr;
    throw DomainError("unknown path loss model '" + name + "'");
}

namespace {

LossDb evaluate(PathLossModel model, const ModelInputs& in, double d)
{
    const double f = in.geometry.f_c;
    switch (model) {
    case PathLossModel::FreeSpace:
        return {fspl(f, d), false};
    case PathLossModel::TwoRay:
        return two_ray_simplified(in.geometry.at_distance(d));
    case PathLossModel::Mtr:
        return mtr_path_loss(in.geometry.at_distance(d), in.sea);
    case PathLossModel::Ci:
        return {ci_path_loss(in.ci, f, d), false};
    case PathLossModel::DualCi:
        return {dual_ci_path_loss(in.dual, f, d), false};
    case PathLossModel::DualCiMtr:
        return dual_ci_mtr_path_loss(in.dual, in.geometry, in.sea, d);
    }
    return LossDb::at_null();
}

} // namespace

std::vector<LossDb> sweep(PathLossModel model, const ModelInputs& in, std::span<const double> distances)
{
    std::vector<LossDb> out(distances.size());
    const auto n = static_cast<std::ptrdiff_t>(distances.size());
    ErrorSlot err;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        err.guard([&] { out[k] = evaluate(model, in, distances[k]); });
    }
    err.rethrow();
    return out;
}

namespace serial {

std::vector<LossDb> sweep(PathLossModel model, const ModelInputs& in, std::span<const double> distances)
{
    std::vector<LossDb> out;
    out.reserve(distances.size());
    for (double d : distances)
        out.push_back(evaluate(model, in, d));
    return out;
}

} // namespace serial

} // namespace mariner
