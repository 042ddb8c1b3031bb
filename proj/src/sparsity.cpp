// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#include "mariner/sparsity.hpp"

#include "mariner/common.hpp"
#include "mariner/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace mariner {

namespace {

constexpr double kLemmaTol = 1e-12;
constexpr double kRandomPdpSpacing = 50e-9;

// Delay of sub-tap j of tap n. Sub-taps are centred on the parent delay and
// spread over less than half the gap to either neighbour, so they stay in
// the parent's delay bin. A lone tap uses a nominal 1 ns gap.
double sub_delay(const PdpRecord& p, std::size_t n, int j, int m)
{
    double gap = kInf;
    if (n + 1 < p.size())
        gap = p.delays[n + 1] - p.delays[n];
    if (n > 0)
        gap = std::min(gap, p.delays[n] - p.delays[n - 1]);
    if (!std::isfinite(gap))
        gap = 1e-9;
    return p.delays[n] + (j - 0.5 * (m - 1)) * gap / m;
}

struct TrialResult {
    double equal_gap = 0.0;
    double random_margin = 0.0;
    double coarsen_excess = 0.0;
};

TrialResult run_trial(std::uint64_t trial_seed, const LemmaCheckConfig& cfg)
{
    const PdpRecord p = random_pdp(trial_seed, cfg.max_taps);
    std::mt19937_64 rng(trial_seed ^ 0x5bd1e995ULL);
    const int m = std::uniform_int_distribution<int>(1, cfg.max_split)(rng);
    const double g = gini(p);
    const PdpRecord eq = split_equal(p, m);
    const double g_eq = gini(eq);
    const PdpRecord fine = split_random(p, m, rng());
    const double g_rand = gini(fine);
    // back to the original resolution: merging the unequal shares again
    const double g_coarse = gini(coarsen_pdp(fine, kRandomPdpSpacing));
    return {std::abs(g_eq - g), g_rand - g_eq, g_coarse - g_rand};
}

template <class ForEach>
LemmaCheckReport lemma_check_impl(const LemmaCheckConfig& cfg, ForEach for_each)
{
    require(cfg.max_taps >= 1 && cfg.max_split >= 1, "lemma check needs max_taps, max_split >= 1");
    std::vector<TrialResult> results(cfg.trials);
    for_each(cfg.trials, [&](std::size_t i) { results[i] = run_trial(cfg.seed ^ static_cast<std::uint64_t>(i), cfg); });

    LemmaCheckReport rep;
    rep.trials = cfg.trials;
    rep.min_random_split_margin = kInf;
    for (const TrialResult& r : results) {
        rep.max_equal_split_gap = std::max(rep.max_equal_split_gap, r.equal_gap);
        rep.min_random_split_margin = std::min(rep.min_random_split_margin, r.random_margin);
        rep.equal_split_violations += r.equal_gap >= kLemmaTol;
        rep.random_split_violations += r.random_margin < -kLemmaTol;
        rep.coarsen_violations += r.coarsen_excess > kLemmaTol;
    }
    if (results.empty())
        rep.min_random_split_margin = 0.0;
    return rep;
}

} // namespace

void PdpRecord::validate() const
{
    require(delays.size() == powers.size(), "PDP delays and powers differ in length");
    require(!powers.empty(), "PDP record is empty");
    bool any_positive = false;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        require(std::isfinite(powers[i]) && powers[i] >= 0.0, "PDP powers must be finite and non-negative");
        require(std::isfinite(delays[i]), "PDP delays must be finite");
        if (i > 0)
            require(delays[i] > delays[i - 1], "PDP delays must be strictly increasing");
        any_positive = any_positive || powers[i] > 0.0;
    }
    require(any_positive, "PDP has no positive power");
    require(noise_floor >= 0.0, "noise floor must be non-negative");
}

double PdpRecord::total_power() const { return std::accumulate(powers.begin(), powers.end(), 0.0); }

double gini(std::span<const double> powers)
{
    require(!powers.empty(), "Gini index needs at least one power");
    std::vector<double> q(powers.begin(), powers.end());
    for (double v : q)
        require(std::isfinite(v) && v >= 0.0, "powers must be finite and non-negative");
    std::sort(q.begin(), q.end());
    const double peak = q.back();
    if (!(peak > 0.0))
        throw DomainError("Gini index of an all-zero PDP is undefined");
    // scaling by the peak keeps equal powers exact: every share becomes 1
    const double n = static_cast<double>(q.size());
    double total = 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double v = q[i] / peak;
        total += v;
        weighted += v * (n - static_cast<double>(i + 1) + 0.5);
    }
    const double g = 1.0 - 2.0 * weighted / (total * n);
    return std::clamp(g, 0.0, 1.0);
}

double gini(const PdpRecord& p) { return gini(std::span<const double>(p.powers)); }

KFactor rician_k_from_pdp(const PdpRecord& p)
{
    p.validate();
    const auto it = std::max_element(p.powers.begin(), p.powers.end());
    const std::size_t strongest = static_cast<std::size_t>(it - p.powers.begin());
    double rest = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (i != strongest)
            rest += p.powers[i];
    if (!(rest > 0.0))
        return {kInf, kInf, true};
    const double k = *it / rest;
    return {k, db10(k), false};
}

SparsityMetrics sparsity_metrics(const PdpRecord& p)
{
    p.validate();
    const KFactor k = rician_k_from_pdp(p);
    return {gini(p), k.db, k.infinite, p.size()};
}

PdpRecord mpc_extract(std::span<const double> dense_powers, double noise_floor, double threshold_db,
                      double delta_tau)
{
    require(threshold_db >= 0.0 && std::isfinite(threshold_db), "threshold must be a finite non-negative dB value");
    require(noise_floor >= 0.0, "noise floor must be non-negative");
    require(delta_tau > 0.0, "bin width must be positive");
    const double level = noise_floor * from_db10(threshold_db);
    PdpRecord out;
    out.noise_floor = noise_floor;
    for (std::size_t i = 0; i < dense_powers.size(); ++i)
        if (dense_powers[i] > level) {
            out.delays.push_back(static_cast<double>(i) * delta_tau);
            out.powers.push_back(dense_powers[i]);
        }
    if (out.powers.empty())
        throw DomainError("no multipath component above the detection threshold");
    return out;
}

PdpRecord mpc_extract(const PdpRecord& dense, double noise_floor, double threshold_db)
{
    require(dense.delays.size() == dense.powers.size(), "PDP delays and powers differ in length");
    require(threshold_db >= 0.0 && std::isfinite(threshold_db), "threshold must be a finite non-negative dB value");
    require(noise_floor >= 0.0, "noise floor must be non-negative");
    const double level = noise_floor * from_db10(threshold_db);
    PdpRecord out;
    out.noise_floor = noise_floor;
    for (std::size_t i = 0; i < dense.size(); ++i)
        if (dense.powers[i] > level) {
            out.delays.push_back(dense.delays[i]);
            out.powers.push_back(dense.powers[i]);
        }
    if (out.powers.empty())
        throw DomainError("no multipath component above the detection threshold");
    return out;
}

PdpRecord split_equal(const PdpRecord& p, int m)
{
    p.validate();
    require(m >= 1, "split factor must be >= 1");
    if (m == 1)
        return p;
    PdpRecord out;
    out.noise_floor = p.noise_floor;
    for (std::size_t n = 0; n < p.size(); ++n) {
        for (int j = 0; j < m; ++j) {
            out.delays.push_back(sub_delay(p, n, j, m));
            out.powers.push_back(p.powers[n] / m);
        }
    }
    return out;
}

PdpRecord split_random(const PdpRecord& p, int m, std::uint64_t seed)
{
    p.validate();
    require(m >= 1, "split factor must be >= 1");
    if (m == 1)
        return p;
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    PdpRecord out;
    out.noise_floor = p.noise_floor;
    std::vector<double> w(static_cast<std::size_t>(m));
    for (std::size_t n = 0; n < p.size(); ++n) {
        // flat Dirichlet: normalized i.i.d. exponentials
        double sum = 0.0;
        for (double& v : w) {
            v = expo(rng);
            sum += v;
        }
        for (int j = 0; j < m; ++j) {
            out.delays.push_back(sub_delay(p, n, j, m));
            out.powers.push_back(p.powers[n] * (w[static_cast<std::size_t>(j)] / sum));
        }
    }
    return out;
}

PdpRecord coarsen_pdp(const PdpRecord& fine, double bin_width)
{
    fine.validate();
    require(bin_width > 0.0 && std::isfinite(bin_width), "bin width must be positive");
    PdpRecord out;
    out.noise_floor = fine.noise_floor;
    long current = 0;
    bool open = false;
    for (std::size_t i = 0; i < fine.size(); ++i) {
        const long k = std::lround(std::floor(fine.delays[i] / bin_width + 0.5));
        if (!open || k != current) {
            out.delays.push_back(static_cast<double>(k) * bin_width);
            out.powers.push_back(0.0);
            current = k;
            open = true;
        }
        out.powers.back() += fine.powers[i];
    }
    return out;
}

PdpRecord random_pdp(std::uint64_t trial_seed, int max_taps)
{
    require(max_taps >= 1, "max_taps must be >= 1");
    std::mt19937_64 rng(trial_seed);
    const int n = std::uniform_int_distribution<int>(1, max_taps)(rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    PdpRecord p;
    // mix of shapes: flat, exponential decay and one dominant tap
    const int shape = std::uniform_int_distribution<int>(0, 2)(rng);
    const double decay = 0.05 + 0.5 * unit(rng);
    for (int i = 0; i < n; ++i) {
        p.delays.push_back(i * kRandomPdpSpacing);
        double v = expo(rng);
        if (shape == 1)
            v *= std::exp(-decay * i);
        p.powers.push_back(v);
    }
    if (shape == 2)
        p.powers[std::uniform_int_distribution<std::size_t>(0, p.size() - 1)(rng)] += 100.0 * (1.0 + unit(rng));
    if (!(std::accumulate(p.powers.begin(), p.powers.end(), 0.0) > 0.0))
        p.powers[0] = 1.0;
    return p;
}

LemmaCheckReport lemma_check(const LemmaCheckConfig& cfg)
{
    return lemma_check_impl(cfg, [](std::size_t n, const std::function<void(std::size_t)>& f) {
        par::for_each_index(n, f);
    });
}

namespace serial {

LemmaCheckReport lemma_check(const LemmaCheckConfig& cfg)
{
    return lemma_check_impl(cfg, [](std::size_t n, const std::function<void(std::size_t)>& f) {
        serial::for_each_index(n, f);
    });
}

} // namespace serial

} // namespace mariner
