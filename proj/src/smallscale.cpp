// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#include "mariner/smallscale.hpp"

#include "mariner/common.hpp"
#include "mariner/optimize.hpp"
#include "mariner/parallel.hpp"
#include "mariner/special.hpp"

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>

namespace mariner {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ----- TWDP density -----------------------------------------------------
//
// The density is a uniform mixture over x in [0, pi] of Rician densities
// with specular amplitude sigma * a(x), a(x) = sqrt(2K (1 - Delta cos x)).
// The integrand is smooth, even and 2 pi-periodic in x, so the trapezoidal
// rule converges geometrically; the node count doubles from 64 until the
// embedded half-resolution estimate agrees to 1e-9.

constexpr int kTwdpNodes = 64;
constexpr int kTwdpMaxNodes = 1 << 16;
constexpr double kTwdpTol = 1e-9;
constexpr double kTwdpCdfTol = 1e-10;   // absolute, per piece

double twdp_integrand(double u_over_sigma, double k, double delta, double x)
{
    const double a = std::sqrt(std::max(0.0, 2.0 * k * (1.0 - delta * std::cos(x))));
    const double diff = u_over_sigma - a;
    return std::exp(-0.5 * diff * diff) * special::bessel_i0e(u_over_sigma * a);
}

double twdp_pdf(const Twdp& p, double u)
{
    if (u <= 0.0)
        return 0.0;
    const double w = u / p.sigma;
    const double pre = u / (p.sigma * p.sigma);
    if (p.k == 0.0 || p.delta == 0.0)
        return pre * twdp_integrand(w, p.k, 0.0, 0.0);

    // trapezoid over [0, pi]; `sum` holds the interior+endpoint weights at the
    // current resolution so that doubling only adds the new odd nodes
    int n = kTwdpNodes;
    double h = kPi / n;
    double ends = 0.5 * (twdp_integrand(w, p.k, p.delta, 0.0) + twdp_integrand(w, p.k, p.delta, kPi));
    double even = 0.0;   // nodes of the n/2 grid (interior)
    for (int j = 2; j < n; j += 2)
        even += twdp_integrand(w, p.k, p.delta, j * h);
    double odd = 0.0;
    for (int j = 1; j < n; j += 2)
        odd += twdp_integrand(w, p.k, p.delta, j * h);
    double coarse = (2.0 * h) * (ends + even) / kPi;
    double fine = h * (ends + even + odd) / kPi;
    while (std::abs(fine - coarse) * pre > kTwdpTol * std::max(1.0, fine * pre) && n < kTwdpMaxNodes) {
        even += odd;
        n *= 2;
        h = kPi / n;
        odd = 0.0;
        for (int j = 1; j < n; j += 2)
            odd += twdp_integrand(w, p.k, p.delta, j * h);
        coarse = fine;
        fine = h * (ends + even + odd) / kPi;
    }
    return pre * fine;
}

double rician_log_pdf(const Rician& p, double x)
{
    if (x <= 0.0)
        return kNegInf;
    const double s2 = p.sigma * p.sigma;
    const double d = x - p.s;
    return std::log(x / s2) - d * d / (2.0 * s2) + std::log(special::bessel_i0e(x * p.s / s2));
}

double nakagami_log_pdf(const Nakagami& p, double x)
{
    if (x < 0.0 || (x == 0.0 && p.m > 0.5))
        return kNegInf;
    if (x == 0.0)   // m = 1/2 is the half-normal, finite at the origin
        return std::log(2.0) + 0.5 * std::log(0.5 / p.omega) - std::lgamma(0.5);
    return std::log(2.0) + p.m * std::log(p.m / p.omega) - std::lgamma(p.m) + (2.0 * p.m - 1.0) * std::log(x) -
           p.m * x * x / p.omega;
}

double lognormal_log_pdf(const Lognormal& p, double x)
{
    if (x <= 0.0)
        return kNegInf;
    const double z = (std::log(x) - p.mu) / p.sigma;
    return -std::log(x * p.sigma * std::sqrt(kTwoPi)) - 0.5 * z * z;
}

double laplace_log_pdf(const Laplace& p, double x) { return -std::log(2.0 * p.b) - std::abs(x - p.mu) / p.b; }

double asym_laplace_log_pdf(const AsymLaplace& p, double x)
{
    const double norm = -std::log(p.b1 + p.b2);
    return x < p.mu ? norm + (x - p.mu) / p.b1 : norm - (x - p.mu) / p.b2;
}

double log_pdf(const FadingModel& m, double x)
{
    return std::visit(overloaded{
                          [x](const Rician& p) { return rician_log_pdf(p, x); },
                          [x](const Twdp& p) {
                              const double f = twdp_pdf(p, x);
                              return f > 0.0 ? std::log(f) : kNegInf;
                          },
                          [x](const Nakagami& p) { return nakagami_log_pdf(p, x); },
                          [x](const Lognormal& p) { return lognormal_log_pdf(p, x); },
                          [x](const Laplace& p) { return laplace_log_pdf(p, x); },
                          [x](const AsymLaplace& p) { return asym_laplace_log_pdf(p, x); },
                      },
                      m);
}

double rician_cdf(const Rician& p, double x)
{
    if (x <= 0.0)
        return 0.0;
    const double s2 = p.sigma * p.sigma;
    if (p.s == 0.0)
        return -std::expm1(-x * x / (2.0 * s2));
    boost::math::non_central_chi_squared_distribution<double> dist(2.0, p.s * p.s / s2);
    return boost::math::cdf(dist, x * x / s2);
}

double twdp_cdf(const Twdp& p, double x)
{
    if (x <= 0.0)
        return 0.0;
    if (p.k == 0.0 || p.delta == 0.0)
        return rician_cdf({p.sigma * std::sqrt(2.0 * p.k), p.sigma}, x);
    const std::function<double(double)> f = [&p](double u) { return twdp_pdf(p, u); };
    // split at the bulk of the mass so the adaptive rule sees the peak
    const double scale = p.sigma * (std::sqrt(2.0 * p.k * (1.0 + p.delta)) + 8.0);
    double acc = 0.0;
    double lo = 0.0;
    for (double edge : {0.25 * scale, 0.5 * scale, 0.75 * scale, scale}) {
        const double hi = std::min(edge, x);
        if (hi > lo)
            acc += optimize::integrate(f, lo, hi, kTwdpCdfTol);
        lo = std::max(lo, hi);
    }
    if (x > lo)
        acc += optimize::integrate(f, lo, x, kTwdpCdfTol);
    return std::clamp(acc, 0.0, 1.0);
}

// ----- TWDP tables ---------------------------------------------------------
//
// Exact TWDP evaluation costs a few hundred special-function calls per point,
// which is too slow for likelihood searches and sorted CDFs over 1e5 samples.
// Both paths tabulate on a uniform grid with spacing tied to sigma instead.

void fill(std::span<const double> xs, std::span<double> out, const std::function<double(double)>& f, bool parallel)
{
    if (parallel)
        par::map(xs, out, f);
    else
        serial::map(xs, out, f);
}

std::size_t grid_nodes(double span_over_sigma, double per_sigma, std::size_t lo, std::size_t hi)
{
    const double want = std::ceil(per_sigma * span_over_sigma);
    return std::clamp(static_cast<std::size_t>(std::max(0.0, want)), lo, hi) + 1;
}

/// CDF by cubic Hermite interpolation of node masses, the density supplying
/// the slopes. Node masses come from a 10-point Gauss rule per cell.
class TwdpCdfTable {
public:
    TwdpCdfTable(const Twdp& p, double upper, bool parallel)
    {
        const std::size_t n = grid_nodes(upper / p.sigma, 32.0, 512, 1 << 16);
        const double h = upper / static_cast<double>(n - 1);
        std::vector<double> x(n), f(n), cell(n - 1);
        for (std::size_t i = 0; i < n; ++i)
            x[i] = h * static_cast<double>(i);
        x.back() = upper;
        fill(x, f, [&p](double u) { return twdp_pdf(p, u); }, parallel);
        auto dens = [&p](double u) { return twdp_pdf(p, u); };
        auto mass = [&](std::size_t i) {
            cell[i] = boost::math::quadrature::gauss<double, 10>::integrate(dens, x[i], x[i + 1]);
        };
        if (parallel)
            par::for_each_index(n - 1, mass);
        else
            serial::for_each_index(n - 1, mass);
        std::vector<double> F(n, 0.0);
        for (std::size_t i = 1; i < n; ++i)
            F[i] = F[i - 1] + cell[i - 1];
        spline_.emplace(std::move(x), std::move(F), std::move(f));
        upper_ = upper;
    }

    double operator()(double u) const
    {
        if (u <= 0.0)
            return 0.0;
        return std::clamp((*spline_)(std::min(u, upper_)), 0.0, 1.0);
    }

private:
    std::optional<boost::math::interpolators::cubic_hermite<std::vector<double>>> spline_;
    double upper_ = 0.0;
};

/// log f(u) - log u is smooth (even and analytic in u) so a cubic B-spline
/// over the data range reproduces it to roughly (h / sigma)^4.
double twdp_log_likelihood_tabulated(const Twdp& p, std::span<const double> data, double lo, double hi)
{
    const std::size_t n = grid_nodes((hi - lo) / p.sigma, 32.0, 256, 1 << 14);
    const double h = (hi - lo) / static_cast<double>(n - 1);
    std::vector<double> x(n), g(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = lo + h * static_cast<double>(i);
    serial::map(x, g, [&p](double u) {
        const double f = twdp_pdf(p, u);
        return f > 0.0 ? std::log(f / u) : kNegInf;
    });
    if (!std::all_of(g.begin(), g.end(), [](double v) { return std::isfinite(v); }))
        return kNegInf;
    const boost::math::interpolators::cardinal_cubic_b_spline<double> spline(g.begin(), g.end(), lo, h);
    double acc = 0.0;
    for (double u : data)
        acc += std::log(u) + spline(std::clamp(u, lo, hi));
    return acc;
}

std::vector<double> twdp_cdf_sorted(const FadingModel& m, std::span<const double> xs, bool parallel)
{
    std::vector<double> out(xs.size(), 0.0);
    if (xs.empty() || !(xs.back() > 0.0))
        return out;
    const TwdpCdfTable table(std::get<Twdp>(m), xs.back(), parallel);
    for (std::size_t i = 0; i < xs.size(); ++i)
        out[i] = table(xs[i]);
    return out;
}

} // namespace

FadingFamily family_of(const FadingModel& m) { return static_cast<FadingFamily>(m.index()); }

std::string family_name(FadingFamily f)
{
    switch (f) {
    case FadingFamily::Rician: return "rician";
    case FadingFamily::Twdp: return "twdp";
    case FadingFamily::Nakagami: return "nakagami";
    case FadingFamily::Lognormal: return "lognormal";
    case FadingFamily::Laplace: return "laplace";
    case FadingFamily::AsymLaplace: return "asym-laplace";
    }
    return "unknown";
}

FadingFamily parse_family(const std::string& name)
{
    for (auto f : {FadingFamily::Rician, FadingFamily::Twdp, FadingFamily::Nakagami, FadingFamily::Lognormal,
                   FadingFamily::Laplace, FadingFamily::AsymLaplace})
        if (family_name(f) == name)
            return f;
    throw DomainError("unknown fading family '" + name + "'");
}

bool is_amplitude_family(FadingFamily f) { return f != FadingFamily::Laplace && f != FadingFamily::AsymLaplace; }

void validate(const FadingModel& m)
{
    std::visit(overloaded{
                   [](const Rician& p) {
                       require(p.s >= 0.0 && p.sigma > 0.0, "Rician needs s >= 0 and sigma > 0");
                   },
                   [](const Twdp& p) {
                       require(p.k >= 0.0 && std::isfinite(p.k), "TWDP needs K >= 0");
                       require(p.delta >= 0.0 && p.delta <= 1.0, "TWDP needs Delta in [0, 1]");
                       require(p.sigma > 0.0, "TWDP needs sigma > 0");
                   },
                   [](const Nakagami& p) {
                       require(p.m >= 0.5 && p.omega > 0.0, "Nakagami needs m >= 0.5 and omega > 0");
                   },
                   [](const Lognormal& p) {
                       require(std::isfinite(p.mu) && p.sigma > 0.0, "lognormal needs finite mu and sigma > 0");
                   },
                   [](const Laplace& p) {
                       require(std::isfinite(p.mu) && p.b > 0.0, "Laplace needs finite mu and b > 0");
                   },
                   [](const AsymLaplace& p) {
                       require(std::isfinite(p.mu) && p.b1 > 0.0 && p.b2 > 0.0,
                               "asymmetric Laplace needs finite mu and b1, b2 > 0");
                   },
               },
               m);
}

double pdf(const FadingModel& m, double x)
{
    validate(m);
    if (const auto* t = std::get_if<Twdp>(&m))
        return twdp_pdf(*t, x);
    const double lp = log_pdf(m, x);
    return lp == kNegInf ? 0.0 : std::exp(lp);
}

double cdf(const FadingModel& m, double x)
{
    validate(m);
    if (std::isinf(x))
        return x > 0.0 ? 1.0 : 0.0;
    return std::visit(overloaded{
                          [x](const Rician& p) { return rician_cdf(p, x); },
                          [x](const Twdp& p) { return twdp_cdf(p, x); },
                          [x](const Nakagami& p) {
                              return x <= 0.0 ? 0.0 : boost::math::gamma_p(p.m, p.m * x * x / p.omega);
                          },
                          [x](const Lognormal& p) {
                              return x <= 0.0 ? 0.0
                                              : 0.5 * std::erfc(-(std::log(x) - p.mu) / (p.sigma * std::sqrt(2.0)));
                          },
                          [x](const Laplace& p) {
                              return x < p.mu ? 0.5 * std::exp((x - p.mu) / p.b)
                                              : 1.0 - 0.5 * std::exp(-(x - p.mu) / p.b);
                          },
                          [x](const AsymLaplace& p) {
                              const double tot = p.b1 + p.b2;
                              return x < p.mu ? p.b1 / tot * std::exp((x - p.mu) / p.b1)
                                              : 1.0 - p.b2 / tot * std::exp(-(x - p.mu) / p.b2);
                          },
                      },
                      m);
}

std::vector<double> cdf_sorted(const FadingModel& m, std::span<const double> sorted_x)
{
    validate(m);
    if (std::holds_alternative<Twdp>(m))
        return twdp_cdf_sorted(m, sorted_x, true);
    std::vector<double> out(sorted_x.size());
    par::map(sorted_x, out, [&m](double x) { return cdf(m, x); });
    return out;
}

std::vector<double> sample(const FadingModel& m, std::size_t n, std::uint64_t seed)
{
    validate(m);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> out;
    out.reserve(n);

    std::visit(overloaded{
                   [&](const Rician& p) {
                       for (std::size_t i = 0; i < n; ++i) {
                           const double re = p.s + p.sigma * gauss(rng);
                           const double im = p.sigma * gauss(rng);
                           out.push_back(std::hypot(re, im));
                       }
                   },
                   [&](const Twdp& p) {
                       const TwdpVoltages v = voltages_from_params(p.k, p.delta, p.sigma);
                       for (std::size_t i = 0; i < n; ++i) {
                           const double psi1 = kTwoPi * unit(rng);
                           const double psi2 = kTwoPi * unit(rng);
                           const double re = v.v1 * std::cos(psi1) + v.v2 * std::cos(psi2) + p.sigma * gauss(rng);
                           const double im = v.v1 * std::sin(psi1) + v.v2 * std::sin(psi2) + p.sigma * gauss(rng);
                           out.push_back(std::hypot(re, im));
                       }
                   },
                   [&](const Nakagami& p) {
                       std::gamma_distribution<double> gam(p.m, p.omega / p.m);
                       for (std::size_t i = 0; i < n; ++i)
                           out.push_back(std::sqrt(gam(rng)));
                   },
                   [&](const Lognormal& p) {
                       for (std::size_t i = 0; i < n; ++i)
                           out.push_back(std::exp(p.mu + p.sigma * gauss(rng)));
                   },
                   [&](const Laplace& p) {
                       for (std::size_t i = 0; i < n; ++i) {
                           const double e = expo(rng);
                           out.push_back(unit(rng) < 0.5 ? p.mu - p.b * e : p.mu + p.b * e);
                       }
                   },
                   [&](const AsymLaplace& p) {
                       const double left = p.b1 / (p.b1 + p.b2);
                       for (std::size_t i = 0; i < n; ++i) {
                           const double e = expo(rng);
                           out.push_back(unit(rng) < left ? p.mu - p.b1 * e : p.mu + p.b2 * e);
                       }
                   },
               },
               m);
    return out;
}

TwdpShape params_from_voltages(double v1, double v2, double sigma)
{
    require(sigma > 0.0, "sigma must be positive");
    require(v1 >= 0.0 && v2 >= 0.0 && v2 <= v1, "voltages must satisfy 0 <= V2 <= V1");
    const double p = v1 * v1 + v2 * v2;
    return {p / (2.0 * sigma * sigma), p > 0.0 ? 2.0 * v1 * v2 / p : 0.0};
}

TwdpVoltages voltages_from_params(double k, double delta, double sigma)
{
    require(sigma > 0.0 && k >= 0.0, "need K >= 0 and sigma > 0");
    require(delta >= 0.0 && delta <= 1.0, "Delta must lie in [0, 1]");
    // V1^2, V2^2 = sigma^2 K (1 +- sqrt(1 - Delta^2))
    const double root = std::sqrt(std::max(0.0, 1.0 - delta * delta));
    const double base = sigma * sigma * k;
    return {std::sqrt(base * (1.0 + root)), std::sqrt(base * (1.0 - root))};
}

double rician_k_db(double s, double sigma)
{
    require(sigma > 0.0, "sigma must be positive");
    return db10(s * s / (2.0 * sigma * sigma));
}

EnvelopeSamples EnvelopeSamples::normalized(std::vector<double> raw)
{
    require(!raw.empty(), "envelope needs at least one sample");
    for (double v : raw)
        require(std::isfinite(v) && v > 0.0, "envelope amplitudes must be positive");
    const double mean = std::accumulate(raw.begin(), raw.end(), 0.0) / static_cast<double>(raw.size());
    for (double& v : raw)
        v /= mean;
    return {std::move(raw)};
}

double EnvelopeSamples::mean() const
{
    return values.empty() ? 0.0 : std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double log_likelihood(const FadingModel& m, std::span<const double> data)
{
    validate(m);
    return par::sum(data.size(), [&](std::size_t i) { return log_pdf(m, data[i]); });
}

namespace serial {

double log_likelihood(const FadingModel& m, std::span<const double> data)
{
    validate(m);
    return serial::sum(data.size(), [&](std::size_t i) { return log_pdf(m, data[i]); });
}

std::vector<double> cdf_sorted(const FadingModel& m, std::span<const double> sorted_x)
{
    validate(m);
    if (std::holds_alternative<Twdp>(m))
        return twdp_cdf_sorted(m, sorted_x, false);
    std::vector<double> out(sorted_x.size());
    serial::map(sorted_x, out, [&m](double x) { return cdf(m, x); });
    return out;
}

} // namespace serial

double ks_statistic(std::span<const double> data, const FadingModel& m)
{
    require(!data.empty(), "K-S statistic needs at least one sample");
    std::vector<double> xs(data.begin(), data.end());
    std::sort(xs.begin(), xs.end());
    const std::vector<double> f = cdf_sorted(m, xs);
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double above = static_cast<double>(i + 1) / n - f[i];
        const double below = f[i] - static_cast<double>(i) / n;
        d = std::max({d, above, below});
    }
    return std::clamp(d, 0.0, 1.0);
}

double pdf_rmse(std::span<const double> data, const FadingModel& m, int bins)
{
    require(bins >= 2, "pdf RMSE needs at least two bins");
    require(data.size() >= 2, "pdf RMSE needs at least two samples");
    const auto [mn, mx] = std::minmax_element(data.begin(), data.end());
    const double lo = *mn;
    const double width = (*mx - lo) / bins;
    require(width > 0.0, "pdf RMSE needs non-constant data");
    std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
    for (double v : data) {
        auto k = static_cast<std::size_t>((v - lo) / width);
        counts[std::min(k, counts.size() - 1)] += 1.0;
    }
    const double scale = 1.0 / (static_cast<double>(data.size()) * width);
    double acc = 0.0;
    for (int k = 0; k < bins; ++k) {
        const double centre = lo + (k + 0.5) * width;
        const double diff = counts[static_cast<std::size_t>(k)] * scale - pdf(m, centre);
        acc += diff * diff;
    }
    return std::sqrt(acc / bins);
}

// ----- maximum likelihood ---------------------------------------------------

namespace {

struct Moments {
    double m1 = 0.0, m2 = 0.0, m4 = 0.0;
};

Moments moments(std::span<const double> x)
{
    Moments m;
    for (double v : x) {
        m.m1 += v;
        m.m2 += v * v;
        m.m4 += v * v * v * v;
    }
    const double n = static_cast<double>(x.size());
    m.m1 /= n;
    m.m2 /= n;
    m.m4 /= n;
    return m;
}

void require_positive(std::span<const double> x, const char* family)
{
    for (double v : x)
        if (!(v > 0.0))
            throw DomainError(std::string(family) + " fit needs strictly positive amplitudes");
}

Rician fit_rician(std::span<const double> x, bool& converged)
{
    require_positive(x, "Rician");
    const Moments mo = moments(x);
    const double s4 = 2.0 * mo.m2 * mo.m2 - mo.m4;
    double s = s4 > 0.0 ? std::pow(s4, 0.25) : 0.5 * std::sqrt(mo.m2);
    s = std::min(s, std::sqrt(mo.m2) * (1.0 - 1e-9));
    double s2 = 0.5 * (mo.m2 - s * s);
    // fixed-point form of the likelihood equations:
    //   s = mean(x I1/I0(x s / sigma^2)),  sigma^2 = (mean(x^2) - s^2) / 2
    converged = false;
    for (int it = 0; it < 20000; ++it) {
        const double inv = 1.0 / s2;
        const double next = par::sum(x.size(), [&](std::size_t i) {
                                return x[i] * special::bessel_ratio_i1_i0(x[i] * s * inv);
                            }) /
                            static_cast<double>(x.size());
        const double next_s2 = 0.5 * (mo.m2 - next * next);
        const bool done = std::abs(next - s) <= 1e-13 * std::max(1.0, s);
        s = next;
        s2 = next_s2;
        if (done) {
            converged = true;
            break;
        }
    }
    if (!(s2 > 0.0))
        throw DomainError("Rician fit: data have no diffuse spread");
    return {s, std::sqrt(s2)};
}

Nakagami fit_nakagami(std::span<const double> x, bool& converged, std::vector<std::string>& warnings)
{
    require_positive(x, "Nakagami");
    const double n = static_cast<double>(x.size());
    const double omega = par::sum(x.size(), [&](std::size_t i) { return x[i] * x[i]; }) / n;
    const double mlog = par::sum(x.size(), [&](std::size_t i) { return std::log(x[i] * x[i]); }) / n;
    const double gap = std::log(omega) - mlog;   // >= 0 by Jensen
    if (!(gap > 0.0))
        throw DomainError("Nakagami fit: constant data");
    // Greenwood-Durand style start, then Newton on log m - digamma(m) = gap
    double m = (3.0 - gap + std::sqrt((gap - 3.0) * (gap - 3.0) + 24.0 * gap)) / (12.0 * gap);
    converged = false;
    for (int it = 0; it < 100; ++it) {
        const double g = std::log(m) - boost::math::digamma(m) - gap;
        const double dg = 1.0 / m - boost::math::trigamma(m);
        const double step = g / dg;
        double next = m - step;
        if (!(next > 0.0))
            next = 0.5 * m;
        const bool done = std::abs(next - m) <= 1e-13 * m;
        m = next;
        if (done) {
            converged = true;
            break;
        }
    }
    if (m < 0.5) {
        warnings.push_back("Nakagami m below 0.5; clamped");
        m = 0.5;
    }
    return {m, omega};
}

Lognormal fit_lognormal(std::span<const double> x)
{
    require_positive(x, "lognormal");
    const double n = static_cast<double>(x.size());
    const double mu = par::sum(x.size(), [&](std::size_t i) { return std::log(x[i]); }) / n;
    const double var = par::sum(x.size(), [&](std::size_t i) {
                           const double d = std::log(x[i]) - mu;
                           return d * d;
                       }) /
                       n;
    if (!(var > 0.0))
        throw DomainError("lognormal fit: constant data");
    return {mu, std::sqrt(var)};
}

Laplace fit_laplace(std::span<const double> x)
{
    std::vector<double> xs(x.begin(), x.end());
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    const double median = n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
    double mad = 0.0;
    for (double v : xs)
        mad += std::abs(v - median);
    mad /= static_cast<double>(n);
    if (!(mad > 0.0))
        throw DomainError("Laplace fit: constant data");
    return {median, mad};
}

AsymLaplace fit_asym_laplace(std::span<const double> x)
{
    // For fixed mu the scales are closed form with A = mean((mu - x)+),
    // B = mean((x - mu)+): b1 = sqrt(A)(sqrt(A)+sqrt(B)), b2 = sqrt(B)(...),
    // and the profile likelihood is -n (2 log(sqrt(A)+sqrt(B)) + 1). The sum
    // of square roots is concave between data points, so the optimum sits on
    // a sample.
    std::vector<double> xs(x.begin(), x.end());
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    const double nn = static_cast<double>(n);
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        prefix[i + 1] = prefix[i] + xs[i];

    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double mu = xs[i];
        const double below = static_cast<double>(i);
        const double a = (mu * below - prefix[i]) / nn;
        const double b = ((prefix[n] - prefix[i + 1]) - mu * (nn - below - 1.0)) / nn;
        const double score = std::sqrt(std::max(0.0, a)) + std::sqrt(std::max(0.0, b));
        if (score < best) {
            best = score;
            best_i = i;
        }
    }
    const double mu = xs[best_i];
    const double below = static_cast<double>(best_i);
    const double a = std::max(0.0, (mu * below - prefix[best_i]) / nn);
    const double b = std::max(0.0, ((prefix[n] - prefix[best_i + 1]) - mu * (nn - below - 1.0)) / nn);
    const double ra = std::sqrt(a), rb = std::sqrt(b);
    if (!(ra > 0.0 && rb > 0.0))
        throw DomainError("asymmetric Laplace fit: data on one side of every candidate location");
    return {mu, ra * (ra + rb), rb * (ra + rb)};
}

struct TwdpCoords {
    static std::vector<double> encode(const Twdp& p)
    {
        return {std::log(std::max(p.k, 1e-8)), std::acos(std::clamp(1.0 - 2.0 * p.delta, -1.0, 1.0)),
                std::log(p.sigma)};
    }
    static Twdp decode(const std::vector<double>& v)
    {
        return {std::exp(std::min(v[0], 12.0)), 0.5 * (1.0 - std::cos(v[1])), std::exp(v[2])};
    }
};

Twdp fit_twdp(std::span<const double> x, const FitOptions& opt, bool& converged)
{
    require_positive(x, "TWDP");
    const Moments mo = moments(x);

    // multi-start on a subsample, then polish the best candidates on all data
    std::vector<double> sub;
    if (x.size() > opt.twdp_subsample) {
        std::vector<double> pool(x.begin(), x.end());
        std::mt19937_64 rng(opt.seed);
        std::shuffle(pool.begin(), pool.end(), rng);
        sub.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(opt.twdp_subsample));
    } else {
        sub.assign(x.begin(), x.end());
    }
    const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    const double lo = *mn, hi = *mx;
    auto nll = [lo, hi](std::span<const double> d) {
        return [d, lo, hi](const std::vector<double>& v) {
            return -twdp_log_likelihood_tabulated(TwdpCoords::decode(v), d, lo, hi);
        };
    };

    std::vector<std::pair<double, Twdp>> starts;
    bool rician_ok = false;
    const Rician r = fit_rician(sub, rician_ok);
    for (double k : {0.1, 1.0, 10.0, 100.0, 1000.0, 10000.0})
        for (double delta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const Twdp p{k, delta, std::sqrt(mo.m2 / (2.0 * (k + 1.0)))};
            starts.emplace_back(nll(sub)(TwdpCoords::encode(p)), p);
        }
    {
        const Twdp p{r.s * r.s / (2.0 * r.sigma * r.sigma), 0.0, r.sigma};
        starts.emplace_back(nll(sub)(TwdpCoords::encode(p)), p);
    }
    std::sort(starts.begin(), starts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    optimize::NelderMeadOptions coarse;
    coarse.max_evaluations = 600;
    coarse.x_tolerance = 1e-6;
    coarse.initial_step = 0.3;
    optimize::MinimizeResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < std::min<std::size_t>(4, starts.size()); ++i) {
        auto res = optimize::nelder_mead(nll(sub), TwdpCoords::encode(starts[i].second), coarse);
        if (res.value < best.value)
            best = res;
    }

    if (sub.size() == x.size()) {
        converged = best.converged;
        return TwdpCoords::decode(best.x);
    }
    optimize::NelderMeadOptions fine;
    fine.max_evaluations = 400;
    fine.x_tolerance = 1e-7;
    fine.initial_step = 0.05;
    const auto res = optimize::nelder_mead(nll(x), best.x, fine);
    converged = res.converged;
    return TwdpCoords::decode(res.x);
}

} // namespace

FitReport fit_mle(FadingFamily family, std::span<const double> data, const FitOptions& opt)
{
    require(data.size() >= opt.min_samples, "too few samples for a maximum-likelihood fit");
    for (double v : data)
        require(std::isfinite(v), "fit data must be finite");
    const auto [mn, mx] = std::minmax_element(data.begin(), data.end());
    if (!(*mx > *mn))
        throw DomainError("cannot fit constant data (zero variance)");

    FitReport rep;
    rep.n = data.size();
    rep.histogram_bins = opt.histogram_bins;
    switch (family) {
    case FadingFamily::Rician: rep.model = fit_rician(data, rep.converged); break;
    case FadingFamily::Twdp: rep.model = fit_twdp(data, opt, rep.converged); break;
    case FadingFamily::Nakagami: rep.model = fit_nakagami(data, rep.converged, rep.warnings); break;
    case FadingFamily::Lognormal: rep.model = fit_lognormal(data); break;
    case FadingFamily::Laplace: rep.model = fit_laplace(data); break;
    case FadingFamily::AsymLaplace: rep.model = fit_asym_laplace(data); break;
    }
    if (!rep.converged)
        rep.warnings.push_back("likelihood maximization did not converge; best parameters reported");
    rep.loglik = log_likelihood(rep.model, data);
    rep.ks = ks_statistic(data, rep.model);
    rep.pdf_rmse = pdf_rmse(data, rep.model, opt.histogram_bins);
    return rep;
}

} // namespace mariner
