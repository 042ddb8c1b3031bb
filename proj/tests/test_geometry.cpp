// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#include "catch_amalgamated.hpp"

#include "mariner/common.hpp"
#include "mariner/geometry.hpp"

#include <cmath>
#include <random>

using namespace mariner;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Independent long-double evaluations used as oracles.
long double oracle_lambda(long double f) { return 299792458.0L / f; }

long double oracle_los(long double ht, long double hr, long double radius)
{
    return std::sqrt(ht * ht + 2.0L * ht * radius) + std::sqrt(hr * hr + 2.0L * hr * radius);
}

long double oracle_fresnel_m(long double f_hz, long double ht, long double hr)
{
    const long double f = f_hz / 1.0e6L;
    const long double s = std::sqrt(ht) + std::sqrt(hr);
    const long double num = 0.00015949L * f * ht * hr * s;
    const long double den = 0.0000389L * f * ht * hr + 4.1L * s;
    return 1000.0L * num / den;
}

LinkGeometry reference_link()
{
    LinkGeometry g;
    g.f_c = 5.8e9;
    g.h_t = 25.0;
    g.h_r = 4.0;
    return g;
}

} // namespace

TEST_CASE("wavelength", "[geometry]")
{
    CHECK_THAT(wavelength(5.8e9), WithinAbs(0.0516883, 1e-7));
    CHECK(wavelength(kSpeedOfLight) == 1.0);
    CHECK_THAT(wavelength(11.6e9), WithinRel(0.5 * wavelength(5.8e9), 1e-15));
    CHECK_THROWS_AS(wavelength(0.0), DomainError);
    CHECK_THROWS_AS(wavelength(-1.0), DomainError);
}

TEST_CASE("break distance", "[geometry]")
{
    LinkGeometry g = reference_link();
    const double oracle = static_cast<double>(4.0L * 25.0L * 4.0L / oracle_lambda(5.8e9L));
    CHECK_THAT(break_distance(g), WithinRel(oracle, 1e-14));
    CHECK_THAT(break_distance(g), WithinAbs(7738.7, 0.05));

    LinkGeometry twice = g;
    twice.h_r = 8.0;
    CHECK_THAT(break_distance(twice), WithinRel(2.0 * break_distance(g), 1e-14));
    LinkGeometry half_f = g;
    half_f.f_c = 2.9e9;
    CHECK_THAT(break_distance(half_f), WithinRel(0.5 * break_distance(g), 1e-14));
}

TEST_CASE("maximum LoS distance", "[geometry]")
{
    LinkGeometry g = reference_link();
    CHECK_THAT(max_los_distance(g), WithinRel(static_cast<double>(oracle_los(25, 4, 6371000)), 1e-14));
    CHECK_THAT(max_los_distance(g), WithinAbs(24987.0, 1.0));
    CHECK(horizon_distance(0.0, 6371000.0) == 0.0);
    CHECK_THAT(horizon_distance(25.0, 6371000.0), WithinRel(std::sqrt(625.0 + 50.0 * 6371000.0), 1e-15));

    LinkGeometry k43 = g;
    k43.k_eff = 4.0 / 3.0;
    CHECK(max_los_distance(k43) > max_los_distance(g));
}

TEST_CASE("60% Fresnel clearance distance", "[geometry]")
{
    LinkGeometry g = reference_link();
    CHECK_THAT(fresnel_clearance_distance(g), WithinRel(static_cast<double>(oracle_fresnel_m(5.8e9L, 25, 4)), 1e-13));
    CHECK_THAT(fresnel_clearance_distance(g), WithinAbs(12630.0, 20.0));

    // increasing in frequency over [1, 10000] MHz
    double prev = 0.0;
    for (double mhz = 1.0; mhz <= 10000.0; mhz *= 1.05) {
        LinkGeometry s = g;
        s.f_c = mhz * 1e6;
        const double v = fresnel_clearance_distance(s);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("threshold ordering and monotonicity in antenna heights", "[geometry]")
{
    const ThresholdDistances t = thresholds(reference_link());
    CHECK(t.d_break < t.d_06f);
    CHECK(t.d_06f < t.d_los_vision);

    for (double h = 1.0; h < 60.0; h += 1.0) {
        LinkGeometry a = reference_link(), b = reference_link();
        a.h_t = h;
        b.h_t = h + 1.0;
        const ThresholdDistances ta = thresholds(a), tb = thresholds(b);
        CHECK(tb.d_break > ta.d_break);
        CHECK(tb.d_06f > ta.d_06f);
        CHECK(tb.d_los_vision > ta.d_los_vision);
        a = reference_link(), b = reference_link();
        a.h_r = h;
        b.h_r = h + 1.0;
        CHECK(thresholds(b).d_break > thresholds(a).d_break);
        CHECK(thresholds(b).d_06f > thresholds(a).d_06f);
        CHECK(thresholds(b).d_los_vision > thresholds(a).d_los_vision);
    }
}

TEST_CASE("geometry validation", "[geometry]")
{
    LinkGeometry g = reference_link();
    CHECK_NOTHROW(g.validate());
    for (auto mutate : std::initializer_list<void (*)(LinkGeometry&)>{
             [](LinkGeometry& x) { x.f_c = 0.0; }, [](LinkGeometry& x) { x.h_t = -1.0; },
             [](LinkGeometry& x) { x.h_r = 0.0; }, [](LinkGeometry& x) { x.d = 0.0; },
             [](LinkGeometry& x) { x.r_e = -5.0; }, [](LinkGeometry& x) { x.k_eff = 0.9; },
             [](LinkGeometry& x) { x.d = std::nan(""); }}) {
        LinkGeometry bad = reference_link();
        mutate(bad);
        CHECK_THROWS_AS(bad.validate(), DomainError);
        CHECK_THROWS_AS(break_distance(bad), DomainError);
    }
}

TEST_CASE("reflection geometry", "[geometry]")
{
    LinkGeometry g = reference_link();
    g.d = 7738.7;

    SECTION("symmetric heights put the specular point midway")
    {
        const ReflectionGeometry r = reflection_geometry(g, 10.0, 10.0);
        CHECK_THAT(r.d1, WithinRel(g.d / 2.0, 1e-15));
    }

    SECTION("path difference at the break distance is half a wavelength")
    {
        const ReflectionGeometry r = reflection_geometry(g, 25.0, 4.0);
        const long double d = 7738.7L;
        const long double exact = std::sqrt(d * d + 29.0L * 29.0L) - std::sqrt(d * d + 21.0L * 21.0L);
        CHECK_THAT(r.delta_d, WithinRel(static_cast<double>(exact), 1e-9));
        CHECK_THAT(r.delta_d, WithinAbs(0.025844, 1e-6));
        CHECK_THAT(r.delta_d, WithinAbs(wavelength(g) / 2.0, 1e-5));
    }

    SECTION("similar triangles and Snell ratio")
    {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> h(0.5, 40.0), dist(200.0, 40000.0);
        for (int i = 0; i < 1000; ++i) {
            LinkGeometry s = g;
            s.d = dist(rng);
            const double ht = h(rng), hr = h(rng);
            const ReflectionGeometry r = reflection_geometry(s, ht, hr);
            CHECK(r.d1 + r.d2 == Catch::Approx(s.d).epsilon(1e-15));
            CHECK_THAT(r.d1 / (s.d - r.d1), WithinRel(ht / hr, 1e-12));
            CHECK_THAT(std::atan(hr / r.d2), WithinAbs(r.grazing_angle, 1e-12));
            if (s.d > 100.0 * (ht + hr))
                CHECK_THAT(r.delta_d, WithinRel(2.0 * ht * hr / s.d, 1e-3));
        }
    }

    SECTION("non-positive effective heights are rejected")
    {
        CHECK_THROWS_AS(reflection_geometry(g, 0.0, 4.0), DomainError);
        CHECK_THROWS_AS(reflection_geometry(g, 25.0, -0.1), DomainError);
    }
}
