// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#include "mariner/geometry.hpp"

#include "mariner/common.hpp"

#include <cmath>

namespace mariner {

void LinkGeometry::validate() const
{
    require(std::isfinite(f_c) && f_c > 0.0, "carrier frequency must be positive");
    require(std::isfinite(h_t) && h_t > 0.0, "Tx antenna height must be positive");
    require(std::isfinite(h_r) && h_r > 0.0, "Rx antenna height must be positive");
    require(std::isfinite(d) && d > 0.0, "link distance must be positive");
    require(std::isfinite(r_e) && r_e > 0.0, "Earth radius must be positive");
    require(std::isfinite(k_eff) && k_eff >= 1.0, "effective Earth radius factor must be >= 1");
}

double wavelength(double f_c)
{
    require(std::isfinite(f_c) && f_c > 0.0, "carrier frequency must be positive");
    return kSpeedOfLight / f_c;
}

double break_distance(const LinkGeometry& g)
{
    g.validate();
    return 4.0 * g.h_t * g.h_r / wavelength(g);
}

double horizon_distance(double h, double radius)
{
    require(h >= 0.0 && radius > 0.0, "horizon distance needs h >= 0 and a positive radius");
    return std::sqrt(h * h + 2.0 * h * radius);
}

double max_los_distance(const LinkGeometry& g)
{
    const double radius = g.effective_radius();
    return horizon_distance(g.h_t, radius) + horizon_distance(g.h_r, radius);
}

double fresnel_clearance_distance(const LinkGeometry& g)
{
    g.validate();
    const double f_mhz = g.f_c * 1e-6;
    const double hh = g.h_t * g.h_r;
    const double root_sum = std::sqrt(g.h_t) + std::sqrt(g.h_r);
    const double km = 0.00015949 * f_mhz * hh * root_sum / (0.0000389 * f_mhz * hh + 4.1 * root_sum);
    return km * 1000.0;
}

ThresholdDistances thresholds(const LinkGeometry& g)
{
    return {break_distance(g), fresnel_clearance_distance(g), max_los_distance(g)};
}

ReflectionGeometry reflection_geometry(const LinkGeometry& g, double h_t_eff, double h_r_eff)
{
    require(std::isfinite(h_t_eff) && h_t_eff > 0.0, "effective Tx height must be positive (wave crest above antenna?)");
    require(std::isfinite(h_r_eff) && h_r_eff > 0.0, "effective Rx height must be positive (wave crest above antenna?)");
    require(std::isfinite(g.d) && g.d > 0.0, "link distance must be positive");

    ReflectionGeometry r;
    r.d1 = g.d * h_t_eff / (h_t_eff + h_r_eff);
    r.d2 = g.d - r.d1;
    r.grazing_angle = std::atan(h_t_eff / r.d1);
    // difference of squares rewritten to avoid cancellation at long range
    const double sum = std::hypot(g.d, h_t_eff + h_r_eff);
    const double dif = std::hypot(g.d, h_t_eff - h_r_eff);
    r.delta_d = 4.0 * h_t_eff * h_r_eff / (sum + dif);
    return r;
}

} // namespace mariner
