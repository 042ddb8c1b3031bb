// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#include "catch_amalgamated.hpp"

#include "mariner/plfit.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace mariner;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kF = 5.8e9;

std::vector<double> grid(double lo, double hi, double step)
{
    std::vector<double> d;
    for (double x = lo; x <= hi + 1e-9; x += step)
        d.push_back(x);
    return d;
}

template <class Model>
std::vector<PathLossSample> make(const std::vector<double>& d, Model model, double sigma, std::uint64_t seed)
{
    std::mt19937 rng(static_cast<std::uint32_t>(seed));
    std::normal_distribution<double> noise(0.0, sigma > 0.0 ? sigma : 1.0);
    std::vector<PathLossSample> out;
    for (double x : d) {
        const double base = model(x);
        if (!std::isfinite(base))
            continue;
        out.push_back({x, base + (sigma > 0.0 ? noise(rng) : 0.0)});
    }
    return out;
}

double rmse_of(const std::vector<PathLossSample>& s, const std::function<double(double)>& model)
{
    long double acc = 0.0L;
    for (const auto& p : s) {
        const long double r = p.pl_db - model(p.d);
        acc += r * r;
    }
    return static_cast<double>(std::sqrt(acc / s.size()));
}

} // namespace

TEST_CASE("CI fit", "[plfit]")
{
    const auto d = grid(100.0, 30000.0, 50.0);

    SECTION("noiseless recovery")
    {
        const CiParams truth{3.14, 1.0, 0.0};
        const auto s = make(d, [&](double x) { return ci_path_loss(truth, kF, x); }, 0.0, 0);
        const PlFitReport r = fit_ci(s, kF);
        CHECK_THAT(r.ci.n, WithinAbs(3.14, 1e-9));
        CHECK_THAT(r.rmse_db, WithinAbs(0.0, 1e-9));
        CHECK(r.residuals.size() == s.size());
        CHECK(r.n_samples == s.size());
    }

    SECTION("free-space data")
    {
        const auto s = make(d, [&](double x) { return fspl(kF, x); }, 0.0, 0);
        const PlFitReport r = fit_ci(s, kF);
        CHECK_THAT(r.ci.n, WithinAbs(2.0, 1e-9));
        CHECK_THAT(r.rmse_db, WithinAbs(0.0, 1e-9));
    }

    SECTION("noisy data and regression optimality")
    {
        const CiParams truth{3.14, 1.0, 0.0};
        std::vector<double> many;
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(100.0, 30000.0);
        for (int i = 0; i < 10000; ++i)
            many.push_back(u(rng));
        const auto s = make(many, [&](double x) { return ci_path_loss(truth, kF, x); }, 4.0, 99);
        const PlFitReport r = fit_ci(s, kF);
        CHECK_THAT(r.ci.n, WithinAbs(3.14, 0.03));
        CHECK_THAT(r.rmse_db, WithinAbs(4.0, 0.2));
        const double best = rmse_of(s, [&](double x) { return ci_path_loss(r.ci, kF, x); });
        CHECK_THAT(best, WithinAbs(r.rmse_db, 1e-9));
        for (double dn : {-0.01, 0.01}) {
            CiParams p = r.ci;
            p.n += dn;
            CHECK(rmse_of(s, [&](double x) { return ci_path_loss(p, kF, x); }) > best);
        }
    }

    SECTION("degenerate inputs")
    {
        const std::vector<PathLossSample> same{{500.0, 100.0}, {500.0, 101.0}};
        CHECK_THROWS_AS(fit_ci(same, kF), DomainError);
        const std::vector<PathLossSample> one{{500.0, 100.0}};
        CHECK_THROWS_AS(fit_ci(one, kF), DomainError);
        const std::vector<PathLossSample> nan{{500.0, 100.0}, {600.0, std::nan("")}};
        CHECK_THROWS_AS(fit_ci(nan, kF), DomainError);
    }
}

TEST_CASE("dual-slope CI fit", "[plfit]")
{
    const double dbreak = 7738.7;
    const auto d = grid(200.0, 33800.0, 20.0);

    SECTION("noiseless recovery")
    {
        const DualSlopeParams truth{2.50, 4.94, dbreak, 0.0, 1.0};
        const auto s = make(d, [&](double x) { return dual_ci_path_loss(truth, kF, x); }, 0.0, 0);
        const PlFitReport r = fit_dual_ci(s, kF, dbreak);
        CHECK_THAT(r.dual.n1, WithinAbs(2.50, 1e-9));
        CHECK_THAT(r.dual.n2, WithinAbs(4.94, 1e-9));
        CHECK_FALSE(r.single_segment);
    }

    SECTION("noisy recovery and optimality")
    {
        const DualSlopeParams truth{2.50, 4.94, dbreak, 0.0, 1.0};
        const auto s = make(d, [&](double x) { return dual_ci_path_loss(truth, kF, x); }, 4.0, 3);
        const PlFitReport r = fit_dual_ci(s, kF, dbreak);
        CHECK_THAT(r.dual.n1, WithinAbs(2.50, 0.1));
        CHECK_THAT(r.dual.n2, WithinAbs(4.94, 0.1));
        const double best = rmse_of(s, [&](double x) { return dual_ci_path_loss(r.dual, kF, x); });
        CHECK_THAT(best, WithinAbs(r.rmse_db, 1e-9));
        for (double a : {-0.01, 0.0, 0.01})
            for (double b : {-0.01, 0.0, 0.01}) {
                if (a == 0.0 && b == 0.0)
                    continue;
                DualSlopeParams p = r.dual;
                p.n1 += a;
                p.n2 += b;
                CHECK(rmse_of(s, [&](double x) { return dual_ci_path_loss(p, kF, x); }) > best);
            }
    }

    SECTION("single-slope generator gives equal exponents")
    {
        const CiParams ci{3.0, 1.0, 0.0};
        const auto s = make(d, [&](double x) { return ci_path_loss(ci, kF, x); }, 4.0, 8);
        const PlFitReport r = fit_dual_ci(s, kF, dbreak);
        CHECK_THAT(r.dual.n1, WithinAbs(3.0, 0.05));
        CHECK_THAT(r.dual.n2, WithinAbs(3.0, 0.05));
    }

    SECTION("no samples past the break falls back to one slope")
    {
        const DualSlopeParams truth{2.2, 4.0, dbreak, 0.0, 1.0};
        const auto s = make(grid(200.0, 7000.0, 20.0), [&](double x) { return dual_ci_path_loss(truth, kF, x); }, 0.0, 0);
        const PlFitReport r = fit_dual_ci(s, kF, dbreak);
        CHECK(r.single_segment);
        CHECK(std::isnan(r.dual.n2));
        CHECK_THAT(r.dual.n1, WithinAbs(2.2, 1e-9));
        CHECK_FALSE(r.warnings.empty());
    }
}

TEST_CASE("dual-slope CI-MTR fit", "[plfit]")
{
    LinkGeometry g;
    SeaStateParams sea;
    sea.v_w = 7.7;
    const double dbreak = break_distance(g);
    const auto d = grid(2000.0, 33800.0, 20.0);

    SECTION("noiseless recovery")
    {
        const DualSlopeParams truth{2.02, 3.27, dbreak, 0.0, 1.0};
        const auto s = make(d, [&](double x) { return dual_ci_mtr_path_loss(truth, g, sea, x).db; }, 0.0, 0);
        const PlFitReport r = fit_dual_ci_mtr(s, g, sea);
        CHECK_THAT(r.dual.n1, WithinAbs(2.02, 1e-9));
        CHECK_THAT(r.dual.n2, WithinAbs(3.27, 1e-9));
        CHECK_THAT(r.rmse_db, WithinAbs(0.0, 1e-8));
        CHECK(r.residuals.size() == r.n_samples);
    }

    SECTION("no reflection reduces to the dual CI fit")
    {
        // with no reflected ray the segment-one regressor is FSPL / 2, so free-space
        // data in segment one is the point where both models coincide
        SeaStateParams none = sea;
        none.gamma_refl = 0.0;
        const DualSlopeParams truth{2.0, 4.1, dbreak, 0.0, 1.0};
        const auto s = make(d, [&](double x) { return dual_ci_path_loss(truth, kF, x); }, 0.0, 0);
        const PlFitReport a = fit_dual_ci_mtr(s, g, none);
        const PlFitReport b = fit_dual_ci(s, kF, dbreak);
        CHECK_THAT(a.dual.n1, WithinAbs(2.0, 1e-9));
        CHECK_THAT(a.dual.n2, WithinAbs(4.1, 1e-9));
        CHECK_THAT(a.dual.n1, WithinAbs(b.dual.n1, 1e-9));
        CHECK_THAT(a.dual.n2, WithinAbs(b.dual.n2, 1e-9));
        for (double x : {2500.0, 7000.0, 20000.0})
            CHECK_THAT(dual_ci_mtr_path_loss(a.dual, g, none, x).db, WithinAbs(dual_ci_path_loss(b.dual, kF, x), 1e-8));
    }

    SECTION("noisy recovery on the measurement span")
    {
        const DualSlopeParams truth{2.02, 3.27, dbreak, 0.0, 1.0};
        std::vector<double> sub;
        for (int i = 0; i < 2000; ++i)
            sub.push_back(2000.0 + i * (31800.0 / 1999.0));
        const auto s = make(sub, [&](double x) { return dual_ci_mtr_path_loss(truth, g, sea, x).db; }, 4.0, 21);
        const PlFitReport r = fit_dual_ci_mtr(s, g, sea);
        CHECK_THAT(r.dual.n1, WithinAbs(2.02, 0.15));
        CHECK_THAT(r.dual.n2, WithinAbs(3.27, 0.15));
        CHECK_THAT(r.rmse_db, WithinAbs(4.0, 0.3));
    }

    SECTION("null samples are excluded and counted")
    {
        SeaStateParams calm;
        const DualSlopeParams truth{2.0, 3.0, dbreak, 0.0, 1.0};
        auto s = make(d, [&](double x) { return dual_ci_mtr_path_loss(truth, g, calm, x).db; }, 0.0, 0);
        const PlFitReport r = fit_dual_ci_mtr(s, g, calm);
        CHECK(r.n_samples + r.excluded_nulls == s.size());
    }
}

TEST_CASE("shadow sigma", "[plfit]")
{
    const std::vector<PathLossSample> s{{100.0, 3.0}, {200.0, -3.0}};
    CHECK(shadow_sigma(s, [](double) { return 0.0; }) == 3.0);
    CHECK(shadow_sigma(s, [](double d) { return d == 100.0 ? 3.0 : -3.0; }) == 0.0);

    // regenerate at a 6.46 dB shadowing sigma
    const CiParams ci{3.14, 1.0, 0.0};
    const auto data = make(grid(2000.0, 33800.0, 20.0), [&](double x) { return ci_path_loss(ci, kF, x); }, 6.46, 4);
    const PlFitReport r = fit_ci(data, kF);
    CHECK_THAT(shadow_sigma(data, [&](double x) { return ci_path_loss(r.ci, kF, x); }), WithinAbs(6.46, 0.2));
    CHECK_THROWS_AS(shadow_sigma(std::vector<PathLossSample>{}, [](double) { return 0.0; }), DomainError);
}
