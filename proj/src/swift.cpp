// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#include "mariner/swift.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace mariner {

void MotionConfig::validate() const
{
    for (double a : {roll_amp, pitch_amp, yaw_amp})
        require(std::isfinite(a) && a >= 0.0 && a < kPi / 2.0, "rotation amplitudes must lie in [0, pi/2)");
    for (double r : {roll_rate, pitch_rate, yaw_rate})
        require(std::isfinite(r) && r >= 0.0, "rotation rates must be >= 0");
}

MotionConfig MotionConfig::from_seed(double peak_omega, std::uint64_t seed, double roll_amp_deg, double pitch_amp_deg,
                                     double yaw_amp_deg)
{
    // independent stream from the wave phases drawn with the same seed
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> rate(0.8 * peak_omega, 1.2 * peak_omega);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    constexpr double deg = kPi / 180.0;
    MotionConfig m;
    m.roll_amp = roll_amp_deg * deg;
    m.pitch_amp = pitch_amp_deg * deg;
    m.yaw_amp = yaw_amp_deg * deg;
    m.roll_rate = rate(rng);
    m.pitch_rate = rate(rng);
    m.yaw_rate = rate(rng);
    m.roll_phase = phase(rng);
    m.pitch_phase = phase(rng);
    m.yaw_phase = phase(rng);
    return m;
}

AntennaPattern AntennaPattern::cosine(double boresight)
{
    AntennaPattern p;
    p.boresight_ = boresight;
    return p;
}

AntennaPattern AntennaPattern::table(std::vector<double> elevations, std::vector<double> gains, double boresight)
{
    require(elevations.size() >= 2 && elevations.size() == gains.size(), "pattern table needs >= 2 matching rows");
    for (std::size_t i = 1; i < elevations.size(); ++i)
        require(elevations[i] > elevations[i - 1], "pattern elevations must be strictly increasing");
    for (double gval : gains)
        require(std::isfinite(gval) && gval >= 0.0, "pattern gains must be >= 0");
    AntennaPattern p;
    p.boresight_ = boresight;
    p.elevations_ = std::move(elevations);
    p.gains_ = std::move(gains);
    const double at_boresight = p.raw_gain(boresight);
    require(at_boresight > 0.0, "pattern gain at boresight must be positive");
    p.norm_ = at_boresight;
    return p;
}

double AntennaPattern::raw_gain(double elevation) const
{
    if (elevations_.empty())
        return std::max(0.0, std::cos(elevation - boresight_));
    if (elevation <= elevations_.front())
        return gains_.front();
    if (elevation >= elevations_.back())
        return gains_.back();
    const auto it = std::upper_bound(elevations_.begin(), elevations_.end(), elevation);
    const std::size_t hi = static_cast<std::size_t>(it - elevations_.begin());
    const std::size_t lo = hi - 1;
    const double w = (elevation - elevations_[lo]) / (elevations_[hi] - elevations_[lo]);
    return gains_[lo] + w * (gains_[hi] - gains_[lo]);
}

double AntennaPattern::gain(double elevation) const { return raw_gain(elevation) / norm_; }

RotationState rotation_angles(const MotionConfig& m, double t)
{
    return {m.roll_amp * std::sin(m.roll_rate * t + m.roll_phase),
            m.pitch_amp * std::sin(m.pitch_rate * t + m.pitch_phase),
            m.yaw_amp * std::sin(m.yaw_rate * t + m.yaw_phase)};
}

namespace {

Mat3 mat_mul(const Mat3& a, const Mat3& b)
{
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                c[i][j] += a[i][k] * b[k][j];
    return c;
}

} // namespace

Mat3 rotation_matrix(const RotationState& s)
{
    const double cf = std::cos(s.phi), sf = std::sin(s.phi);
    const double ct = std::cos(s.theta), st = std::sin(s.theta);
    const double cp = std::cos(s.psi), sp = std::sin(s.psi);
    const Mat3 rx{{{1.0, 0.0, 0.0}, {0.0, cf, -sf}, {0.0, sf, cf}}};
    const Mat3 ry{{{ct, 0.0, st}, {0.0, 1.0, 0.0}, {-st, 0.0, ct}}};
    const Mat3 rz{{{cp, -sp, 0.0}, {sp, cp, 0.0}, {0.0, 0.0, 1.0}}};
    return mat_mul(rz, mat_mul(ry, rx));
}

Vec3 mat_vec(const Mat3& m, const Vec3& v)
{
    Vec3 out{};
    for (int i = 0; i < 3; ++i)
        out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    return out;
}

Vec3 los_direction(const LinkGeometry& g)
{
    g.validate();
    const double a0 = std::atan((g.h_t - g.h_r) / g.d);
    return {std::cos(a0), 0.0, std::sin(a0)};
}

double rotated_los_z(const RotationState& s, double alpha0)
{
    return -std::sin(s.theta) * std::cos(alpha0) + std::cos(s.theta) * std::cos(s.phi) * std::sin(alpha0);
}

LossDb pattern_loss(const RotationState& s, const LinkGeometry& g, const AntennaPattern& p)
{
    const Vec3 u = mat_vec(rotation_matrix(s), los_direction(g));
    const double f = p.gain(std::asin(std::clamp(u[2], -1.0, 1.0)));
    if (f <= 0.0)
        return LossDb::at_null();
    return {-db20(f), false};
}

LossDb polarization_loss(const RotationState& s)
{
    const double rho = std::abs(std::cos(s.theta) * std::cos(s.phi));
    if (rho <= 1e-15)
        return LossDb::at_null();
    return {-db20(rho), false};
}

namespace {

struct HeightModel {
    const LinkGeometry& g;
    const HarmonicSet& waves;
    double t;
    double sea_at_rx;

    double h_t_eff(double d1) const { return g.h_t - surface_height(waves, t, d1); }
    double h_r_eff(double d1) const { return g.h_r + sea_at_rx - surface_height(waves, t, d1); }
    double residual(double d1) const { return d1 * h_r_eff(d1) - (g.d - d1) * h_t_eff(d1); }
};

constexpr int kFixedPointSteps = 50;
constexpr double kFixedPointTol = 1e-3;   // m

} // namespace

EffectiveHeights effective_heights(const LinkGeometry& g, const HarmonicSet& waves, double t)
{
    g.validate();
    const HeightModel hm{g, waves, t, surface_height(waves, t, g.d)};
    const double eps = 1e-9 * g.d;
    const double lo_lim = eps;
    const double hi_lim = g.d - eps;

    EffectiveHeights out;
    double d1 = g.d * g.h_t / (g.h_t + g.h_r);
    bool fixed_point = false;
    for (int k = 0; k < kFixedPointSteps; ++k) {
        const double te = hm.h_t_eff(d1);
        const double re = hm.h_r_eff(d1);
        ++out.iterations;
        if (!(te + re > 0.0))
            break;
        const double next = std::clamp(g.d * te / (te + re), lo_lim, hi_lim);
        const double step = std::abs(next - d1);
        d1 = next;
        if (step < kFixedPointTol) {
            fixed_point = true;
            break;
        }
    }
    if (!fixed_point) {
        out.bracketed = true;
        d1 = g.d * g.h_t / (g.h_t + g.h_r);
    }

    // Bracket the root nearest to the current estimate, then bisect. The
    // residual is negative near the Tx and positive near the Rx, so a bracket
    // always exists while the Tx sits above every wave crest.
    const double f0 = hm.residual(d1);
    double a = d1, b = d1, fa = f0;
    if (f0 != 0.0) {
        double width = fixed_point ? 10.0 * kFixedPointTol : 1.0;
        bool found = false;
        while (!found) {
            const double left = std::max(lo_lim, d1 - width);
            const double right = std::min(hi_lim, d1 + width);
            const double fl = hm.residual(left);
            const double fr = hm.residual(right);
            if ((fl < 0.0) != (f0 < 0.0) || fl == 0.0) {
                a = left, b = d1, fa = fl;
                found = true;
            } else if ((fr < 0.0) != (f0 < 0.0) || fr == 0.0) {
                a = d1, b = right, fa = f0;
                found = true;
            } else if (left == lo_lim && right == hi_lim) {
                break;
            }
            width *= 1.6;
        }
        if (!found) {
            std::ostringstream msg;
            msg << "reflection point not bracketed at t=" << t << " s (residual " << f0 << ")";
            throw SolverError(msg.str());
        }
        for (int k = 0; k < 200 && (b - a) > 1e-12 * g.d; ++k) {
            const double m = 0.5 * (a + b);
            const double fm = hm.residual(m);
            if (fm == 0.0) {
                a = b = m;
                break;
            }
            if ((fm < 0.0) == (fa < 0.0))
                a = m, fa = fm;
            else
                b = m;
        }
        d1 = 0.5 * (a + b);
    }

    out.d1 = d1;
    out.h_t_eff = hm.h_t_eff(d1);
    out.h_r_eff = hm.h_r_eff(d1);
    return out;
}

double series_std(std::span<const double> v)
{
    if (v.size() < 2)
        return 0.0;
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double acc = 0.0;
    for (double x : v)
        acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

SwiftSeries simulate_swift(const SwiftConfig& cfg)
{
    cfg.geometry.validate();
    cfg.sea.validate();
    require(cfg.dt > 0.0, "time step must be positive");
    require(cfg.duration >= cfg.dt, "duration must cover at least one step");

    SwiftSeries out;
    out.seed = cfg.seed;
    out.geometry = cfg.geometry;
    out.sea = cfg.sea;

    HarmonicSet waves;
    double peak = 1.0;
    if (cfg.sea.v_w > 0.0) {
        WaveSpectrumConfig wc = cfg.waves;
        wc.v_w = cfg.sea.v_w;
        wc.seed = cfg.seed;
        waves = build_harmonics(wc);
        peak = pm_peak_frequency(cfg.sea.v_w);
    }
    const MotionConfig motion = cfg.motion_from_seed ? MotionConfig::from_seed(peak, cfg.seed) : cfg.motion;
    motion.validate();

    const auto steps = static_cast<std::size_t>(std::floor(cfg.duration / cfg.dt + 1e-9));
    std::vector<double> level;
    level.reserve(steps);
    out.t.reserve(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        try {
            const EffectiveHeights eh = effective_heights(cfg.geometry, waves, t);
            if (!(eh.h_t_eff > 0.0 && eh.h_r_eff > 0.0)) {
                ++out.flagged;
                continue;
            }
            const LossDb pl = mtr_path_loss(cfg.geometry, cfg.sea, eh.h_t_eff, eh.h_r_eff);
            const RotationState rs = rotation_angles(motion, t);
            const LossDb lg = pattern_loss(rs, cfg.geometry, cfg.pattern);
            const LossDb lp = polarization_loss(rs);
            if (pl.null || lg.null || lp.null) {
                ++out.flagged;
                continue;
            }
            level.push_back(-pl.db - lg.db - lp.db);
            out.t.push_back(t);
        } catch (const SolverError&) {
            ++out.flagged;
        }
    }
    require(!level.empty(), "every SWIFT step was flagged");
    const double mean = std::accumulate(level.begin(), level.end(), 0.0) / static_cast<double>(level.size());
    out.fading_db.reserve(level.size());
    for (double v : level)
        out.fading_db.push_back(v - mean);
    return out;
}

Histogram empirical_pdf(std::span<const double> values, double bin_width)
{
    require(values.size() >= 2, "a PDF estimate needs at least two samples");
    require(bin_width > 0.0, "bin width must be positive");
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double lo = std::floor(*mn / bin_width) * bin_width;
    const auto nbins = static_cast<std::size_t>(std::floor((*mx - lo) / bin_width)) + 1;

    Histogram h;
    h.bin_width = bin_width;
    h.density.assign(nbins, 0.0);
    for (double v : values) {
        auto k = static_cast<std::size_t>(std::floor((v - lo) / bin_width));
        h.density[std::min(k, nbins - 1)] += 1.0;
    }
    const double scale = 1.0 / (static_cast<double>(values.size()) * bin_width);
    h.centers.reserve(nbins);
    for (std::size_t k = 0; k < nbins; ++k) {
        h.centers.push_back(lo + (static_cast<double>(k) + 0.5) * bin_width);
        h.density[k] *= scale;
    }
    return h;
}

ScaleDecomposition decompose_scales(const std::vector<std::vector<double>>& groups)
{
    require(!groups.empty(), "decomposition needs at least one group");
    ScaleDecomposition out;
    std::vector<double> level_db;
    level_db.reserve(groups.size());
    for (const auto& grp : groups) {
        require(!grp.empty(), "every group must be non-empty");
        const double mean = std::accumulate(grp.begin(), grp.end(), 0.0) / static_cast<double>(grp.size());
        require(mean > 0.0, "group mean amplitude must be positive");
        level_db.push_back(db20(mean));
        for (double a : grp)
            out.small_scale.push_back(a / mean);
    }
    const double location = std::accumulate(level_db.begin(), level_db.end(), 0.0) / static_cast<double>(level_db.size());
    for (double l : level_db)
        out.swift_db.push_back(l - location);
    return out;
}

} // namespace mariner
