// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

// Channel sparsity: Gini index and Rician K factor of power-delay profiles,
// MPC extraction from dense PDPs, and the tap-splitting / coarsening
// transforms used to check how resolution affects the Gini index.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mariner {

/// Power-delay profile. Delays in seconds (strictly increasing), powers
/// linear and non-negative.
struct PdpRecord {
    std::vector<double> delays;
    std::vector<double> powers;
    double noise_floor = 0.0;

    void validate() const;
    std::size_t size() const { return powers.size(); }
    double total_power() const;
};

double gini(const PdpRecord& p);
/// Gini index of a bare power vector (order irrelevant).
double gini(std::span<const double> powers);

struct KFactor {
    double linear = 0.0;
    double db = 0.0;
    bool infinite = false;   ///< single tap or all other taps zero
};

/// Strongest tap over the sum of all the others.
KFactor rician_k_from_pdp(const PdpRecord& p);

struct SparsityMetrics {
    double gini = 0.0;
    double k_factor_db = 0.0;
    bool k_infinite = false;
    std::size_t n_mpc = 0;
};

SparsityMetrics sparsity_metrics(const PdpRecord& p);

/// Default MPC detection margin over the noise floor.
inline constexpr double kDefaultMpcThresholdDb = 6.0;

/// Keeps bins whose power exceeds noise_floor * 10^(threshold_db/10)
/// (strictly). Bin i sits at delay i * delta_tau.
PdpRecord mpc_extract(std::span<const double> dense_powers, double noise_floor, double threshold_db,
                      double delta_tau);

/// Same rule applied to an existing record; delays are kept.
PdpRecord mpc_extract(const PdpRecord& dense, double noise_floor, double threshold_db);

/// Every tap becomes m taps carrying P/m at sub-delays centred on the parent
/// delay and confined to its delay bin.
PdpRecord split_equal(const PdpRecord& p, int m);

/// Every tap becomes m taps with shares drawn from a flat Dirichlet.
PdpRecord split_random(const PdpRecord& p, int m, std::uint64_t seed);

/// Incoherent power sum per delay bin. Bins are centred on k * bin_width,
/// the same grid a sounder with that resolution reports; output delays are
/// the bin centres.
PdpRecord coarsen_pdp(const PdpRecord& fine, double bin_width);

struct LemmaCheckConfig {
    std::size_t trials = 10000;
    int max_taps = 50;
    int max_split = 8;
    std::uint64_t seed = 1;
};

struct LemmaCheckReport {
    std::size_t trials = 0;
    std::size_t equal_split_violations = 0;    ///< |G(split_equal) - G| >= 1e-12
    std::size_t random_split_violations = 0;   ///< G(split_random) < G(split_equal) - 1e-12
    /// G(coarsen(split_random)) > G(split_random) + 1e-12, coarsening back to
    /// the original tap spacing
    std::size_t coarsen_violations = 0;
    double max_equal_split_gap = 0.0;
    double min_random_split_margin = 0.0;
};

/// Randomized check of the splitting and coarsening properties. Trial i uses
/// seed ^ i, so the report does not depend on the thread count.
LemmaCheckReport lemma_check(const LemmaCheckConfig& cfg);

/// Draws the random PDP used by trial `trial_seed` of lemma_check: up to
/// max_taps taps on a 50 ns grid.
PdpRecord random_pdp(std::uint64_t trial_seed, int max_taps);

namespace serial {
LemmaCheckReport lemma_check(const LemmaCheckConfig& cfg);
} // namespace serial

} // namespace mariner
