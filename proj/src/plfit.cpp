// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#include "mariner/plfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mariner {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Row {
    double x1;
    double x2;
    double y;
};

double rms(std::span<const double> v)
{
    if (v.empty())
        return 0.0;
    double acc = 0.0;
    for (double r : v)
        acc += r * r;
    return std::sqrt(acc / static_cast<double>(v.size()));
}

bool has_two_distinct_distances(std::span<const PathLossSample> samples)
{
    return std::any_of(samples.begin(), samples.end(), [&](const PathLossSample& s) { return s.d != samples.front().d; });
}

void check_samples(std::span<const PathLossSample> samples)
{
    require(samples.size() >= 2, "path loss fit needs at least two samples");
    for (const auto& s : samples)
        require(s.d > 0.0 && std::isfinite(s.pl_db), "path loss samples need d > 0 and a finite loss");
    require(has_two_distinct_distances(samples), "degenerate design: all samples at one distance");
}

/// Least squares without intercept: y ~ a x1 + b x2.
std::pair<double, double> solve_two(std::span<const Row> rows)
{
    double s11 = 0.0, s12 = 0.0, s22 = 0.0, t1 = 0.0, t2 = 0.0;
    for (const Row& r : rows) {
        s11 += r.x1 * r.x1;
        s12 += r.x1 * r.x2;
        s22 += r.x2 * r.x2;
        t1 += r.x1 * r.y;
        t2 += r.x2 * r.y;
    }
    const double det = s11 * s22 - s12 * s12;
    if (!(std::abs(det) > 1e-12 * std::max(1.0, s11 * s22)))
        throw DomainError("degenerate design matrix in dual-slope fit");
    return {(t1 * s22 - t2 * s12) / det, (s11 * t2 - s12 * t1) / det};
}

void finish(PlFitReport& rep)
{
    rep.rmse_db = rms(rep.residuals);
    rep.n_samples = rep.residuals.size();
    rep.ci.sigma_sf = rep.rmse_db;
    rep.dual.sigma_sf = rep.rmse_db;
}

} // namespace

PlFitReport fit_ci(std::span<const PathLossSample> samples, double f, double d0)
{
    check_samples(samples);
    require(d0 > 0.0, "reference distance must be positive");
    const double anchor = fspl(f, d0);
    double sab = 0.0, sbb = 0.0;
    for (const auto& s : samples) {
        require(s.d >= d0, "CI fit needs every sample at d >= d0");
        const double a = s.pl_db - anchor;
        const double b = 10.0 * std::log10(s.d / d0);
        sab += a * b;
        sbb += b * b;
    }
    if (sbb <= 0.0)
        throw DomainError("degenerate design: all samples at the reference distance");

    PlFitReport rep;
    rep.kind = PlModelKind::Ci;
    rep.ci = {sab / sbb, d0, 0.0};
    rep.residuals.reserve(samples.size());
    for (const auto& s : samples)
        rep.residuals.push_back(s.pl_db - ci_path_loss(rep.ci, f, s.d));
    finish(rep);
    return rep;
}

PlFitReport fit_dual_ci(std::span<const PathLossSample> samples, double f, double d_break, double d0)
{
    check_samples(samples);
    require(d_break > d0, "break distance must exceed the reference distance");
    const bool beyond = std::any_of(samples.begin(), samples.end(), [&](const auto& s) { return s.d > d_break; });
    if (!beyond) {
        PlFitReport rep = fit_ci(samples, f, d0);
        rep.kind = PlModelKind::DualCi;
        rep.single_segment = true;
        rep.dual = {rep.ci.n, kNaN, d_break, rep.rmse_db, d0};
        rep.warnings.push_back("no samples beyond the break distance; n2 left unset");
        return rep;
    }

    const double anchor = fspl(f, d0);
    const double x1_break = 10.0 * std::log10(d_break / d0);
    std::vector<Row> rows;
    rows.reserve(samples.size());
    for (const auto& s : samples) {
        require(s.d >= d0, "dual-slope CI fit needs every sample at d >= d0");
        if (s.d <= d_break)
            rows.push_back({10.0 * std::log10(s.d / d0), 0.0, s.pl_db - anchor});
        else
            rows.push_back({x1_break, 10.0 * std::log10(s.d / d_break), s.pl_db - anchor});
    }
    const auto [n1, n2] = solve_two(rows);

    PlFitReport rep;
    rep.kind = PlModelKind::DualCi;
    rep.dual = {n1, n2, d_break, 0.0, d0};
    for (const auto& s : samples)
        rep.residuals.push_back(s.pl_db - dual_ci_path_loss(rep.dual, f, s.d));
    finish(rep);
    return rep;
}

PlFitReport fit_dual_ci_mtr(std::span<const PathLossSample> samples, const LinkGeometry& g, const SeaStateParams& sea)
{
    check_samples(samples);
    const double d_break = break_distance(g);
    const LossDb x_break = mtr_log_term(g, sea, d_break);
    if (x_break.null)
        throw DomainError("MTR term is on an interference null at the break distance");

    std::vector<Row> rows;
    rows.reserve(samples.size());
    std::size_t nulls = 0;
    for (const auto& s : samples) {
        if (s.d <= d_break) {
            const LossDb x = mtr_log_term(g, sea, s.d);
            if (x.null) {
                ++nulls;
                continue;
            }
            rows.push_back({x.db, 0.0, s.pl_db});
        } else {
            rows.push_back({x_break.db, 10.0 * std::log10(s.d / d_break), s.pl_db});
        }
    }

    PlFitReport rep;
    rep.kind = PlModelKind::DualCiMtr;
    rep.excluded_nulls = nulls;
    const bool beyond = std::any_of(rows.begin(), rows.end(), [](const Row& r) { return r.x2 > 0.0; });
    if (beyond) {
        const auto [n1, n2] = solve_two(rows);
        rep.dual = {n1, n2, d_break, 0.0, 1.0};
    } else {
        double sxy = 0.0, sxx = 0.0;
        for (const Row& r : rows) {
            sxy += r.x1 * r.y;
            sxx += r.x1 * r.x1;
        }
        require(sxx > 0.0, "degenerate design in CI-MTR fit");
        rep.dual = {sxy / sxx, kNaN, d_break, 0.0, 1.0};
        rep.single_segment = true;
        rep.warnings.push_back("no samples beyond the break distance; n2 left unset");
    }
    for (std::size_t i = 0; i < rows.size(); ++i)
        rep.residuals.push_back(rows[i].y - (rep.dual.n1 * rows[i].x1 + (beyond ? rep.dual.n2 * rows[i].x2 : 0.0)));
    if (static_cast<double>(nulls) > 0.2 * static_cast<double>(samples.size()))
        rep.warnings.push_back("more than 20% of samples fall on MTR interference nulls");
    finish(rep);
    return rep;
}

double shadow_sigma(std::span<const PathLossSample> samples, const std::function<double(double)>& model_db)
{
    require(!samples.empty(), "shadow sigma needs at least one sample");
    std::vector<double> res;
    res.reserve(samples.size());
    for (const auto& s : samples)
        res.push_back(s.pl_db - model_db(s.d));
    return rms(res);
}

} // namespace mariner
