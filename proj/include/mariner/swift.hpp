// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

// Sea-wave-induced fixed-point (SWIFT) fading: a stationary vessel sees its
// received level move on a seconds timescale because the waves change the
// antenna heights relative to the reflecting surface, and because the vessel
// rolls, pitches and yaws.

#pragma once

#include "mariner/common.hpp"
#include "mariner/geometry.hpp"
#include "mariner/pathloss.hpp"
#include "mariner/seastate.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace mariner {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

/// Sinusoidal roll/pitch/yaw. Angles and phases in rad, rates in rad/s.
struct MotionConfig {
    double roll_amp = 0.0;
    double pitch_amp = 0.0;
    double yaw_amp = 0.0;
    double roll_rate = 0.0;
    double pitch_rate = 0.0;
    double yaw_rate = 0.0;
    double roll_phase = 0.0;
    double pitch_phase = 0.0;
    double yaw_phase = 0.0;

    void validate() const;

    /// Default sway: 5 deg roll and pitch, 2 deg yaw, rates drawn within
    /// +-20 % of the wave peak frequency, phases uniform on [0, 2 pi).
    static MotionConfig from_seed(double peak_omega, std::uint64_t seed, double roll_amp_deg = 5.0,
                                  double pitch_amp_deg = 5.0, double yaw_amp_deg = 2.0);
};

struct RotationState {
    double phi = 0.0;    ///< roll [rad]
    double theta = 0.0;  ///< pitch [rad]
    double psi = 0.0;    ///< yaw [rad]
};

/// Elevation pattern of the Rx antenna, amplitude gain F(elevation).
/// Either the analytic cos(e - boresight) or a table with linear
/// interpolation, normalized so that F(boresight) == 1.
class AntennaPattern {
public:
    static AntennaPattern cosine(double boresight = 0.0);
    /// Elevations must be strictly increasing; gains >= 0. Values outside the
    /// table are clamped to the end points.
    static AntennaPattern table(std::vector<double> elevations, std::vector<double> gains, double boresight = 0.0);

    double gain(double elevation) const;
    double boresight() const { return boresight_; }
    bool is_table() const { return !elevations_.empty(); }
    const std::vector<double>& elevations() const { return elevations_; }
    const std::vector<double>& gains() const { return gains_; }

private:
    double raw_gain(double elevation) const;

    double boresight_ = 0.0;
    double norm_ = 1.0;
    std::vector<double> elevations_;
    std::vector<double> gains_;
};

RotationState rotation_angles(const MotionConfig& m, double t);

/// Rz(psi) Ry(theta) Rx(phi)
Mat3 rotation_matrix(const RotationState& s);

Vec3 mat_vec(const Mat3& m, const Vec3& v);

/// [cos a0, 0, sin a0] with a0 = atan((h_t - h_r) / d).
Vec3 los_direction(const LinkGeometry& g);

/// z component of the rotated LoS vector in closed form; yaw drops out.
double rotated_los_z(const RotationState& s, double alpha0);

/// -20 log10 F(asin(u_z)), u = M u0. Null when F is zero.
LossDb pattern_loss(const RotationState& s, const LinkGeometry& g, const AntennaPattern& p);

/// -20 log10 |cos theta cos phi|. Null at +-pi/2.
LossDb polarization_loss(const RotationState& s);

struct EffectiveHeights {
    double h_t_eff = 0.0;
    double h_r_eff = 0.0;
    double d1 = 0.0;
    int iterations = 0;
    bool bracketed = false;   ///< fixed point did not converge; root found by bracketing
};

/// Solves the coupled reflection-point system at time t:
///   h_t_eff = h_t - h_s(t, d1), h_r_eff = h_r + h_s(t, d) - h_s(t, d1),
///   d1 / (d - d1) = h_t_eff / h_r_eff.
/// Throws SolverError if no root is found.
EffectiveHeights effective_heights(const LinkGeometry& g, const HarmonicSet& waves, double t);

struct SwiftConfig {
    LinkGeometry geometry;
    SeaStateParams sea;            ///< sea.v_w also drives the wave spectrum
    WaveSpectrumConfig waves;      ///< v_w and seed are overwritten from sea / seed
    MotionConfig motion;
    bool motion_from_seed = true;  ///< draw default motion instead of using `motion`
    AntennaPattern pattern = AntennaPattern::cosine();
    double duration = 93.0;        ///< [s]
    double dt = 0.1;               ///< [s]
    std::uint64_t seed = 1;
};

struct SwiftSeries {
    std::vector<double> t;          ///< sample times that produced a finite level [s]
    std::vector<double> fading_db;  ///< de-meaned received level [dB]
    std::size_t flagged = 0;        ///< steps dropped (null, crest above antenna, solver failure)
    std::uint64_t seed = 0;
    LinkGeometry geometry;
    SeaStateParams sea;
};

SwiftSeries simulate_swift(const SwiftConfig& cfg);

double series_std(std::span<const double> v);

struct Histogram {
    std::vector<double> centers;
    std::vector<double> density;
    double bin_width = 0.0;
};

/// Normalized histogram with bins aligned to multiples of bin_width.
Histogram empirical_pdf(std::span<const double> values, double bin_width);

struct ScaleDecomposition {
    std::vector<double> swift_db;      ///< per group, de-meaned dB level of the group mean amplitude
    std::vector<double> small_scale;   ///< per sample, amplitude / group mean
};

ScaleDecomposition decompose_scales(const std::vector<std::vector<double>>& groups);

} // namespace mariner
