// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

// Link geometry for a shore-to-ship link over the sea, and the three distances
// that separate the propagation regimes: the two-ray break point, the 60 %
// Fresnel-zone clearance distance and the radio horizon.

#pragma once

namespace mariner {

struct LinkGeometry {
    double f_c = 5.8e9;          ///< carrier frequency [Hz]
    double h_t = 25.0;           ///< Tx antenna height above calm sea [m]
    double h_r = 4.0;            ///< Rx antenna height above calm sea [m]
    double d = 1000.0;           ///< horizontal Tx-Rx distance [m]
    double r_e = 6'371'000.0;    ///< Earth radius [m]
    double k_eff = 1.0;          ///< effective Earth radius multiplier

    /// Throws DomainError if any invariant is violated.
    void validate() const;

    double effective_radius() const { return k_eff * r_e; }

    LinkGeometry at_distance(double dist) const
    {
        LinkGeometry g = *this;
        g.d = dist;
        return g;
    }
};

struct ThresholdDistances {
    double d_break = 0.0;
    double d_06f = 0.0;
    double d_los_vision = 0.0;
};

struct ReflectionGeometry {
    double d1 = 0.0;             ///< Tx to specular point, horizontal [m]
    double d2 = 0.0;             ///< specular point to Rx, horizontal [m]
    double grazing_angle = 0.0;  ///< [rad]
    double delta_d = 0.0;        ///< reflected minus direct path length [m]
};

double wavelength(double f_c);
inline double wavelength(const LinkGeometry& g) { return wavelength(g.f_c); }

/// 4 h_t h_r / lambda, the last maximum of the two-ray interference pattern.
double break_distance(const LinkGeometry& g);

/// Distance to the radio horizon of a single antenna of height h >= 0.
double horizon_distance(double h, double radius);

/// Sum of both antennas' horizon distances over a sphere of radius k_eff * r_e.
double max_los_distance(const LinkGeometry& g);

/// Distance beyond which the Earth bulge enters 60 % of the first Fresnel zone
/// (the ITU clearance expression; evaluated in MHz/km internally).
double fresnel_clearance_distance(const LinkGeometry& g);

ThresholdDistances thresholds(const LinkGeometry& g);

/// Specular reflection over a locally flat sea at the given effective antenna
/// heights. Throws DomainError for non-positive heights.
ReflectionGeometry reflection_geometry(const LinkGeometry& g, double h_t_eff, double h_r_eff);

} // namespace mariner
