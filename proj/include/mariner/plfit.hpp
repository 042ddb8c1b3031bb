// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#pragma once

#include "mariner/pathloss.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mariner {

struct PathLossSample {
    double d = 0.0;      ///< [m]
    double pl_db = 0.0;
};

enum class PlModelKind { Ci, DualCi, DualCiMtr };

/// Result of an RMSE-minimizing path loss fit. `rmse_db` doubles as the
/// shadow-fading standard deviation and is copied into the params.
struct PlFitReport {
    PlModelKind kind = PlModelKind::Ci;
    CiParams ci;
    DualSlopeParams dual;
    double rmse_db = 0.0;
    std::size_t n_samples = 0;          ///< samples that entered the fit
    std::vector<double> residuals;      ///< measured - model, one per accepted sample
    std::size_t excluded_nulls = 0;
    bool single_segment = false;        ///< dual fit fell back to a single slope
    std::vector<std::string> warnings;
};

/// Closed-form least-squares path loss exponent of the CI model.
PlFitReport fit_ci(std::span<const PathLossSample> samples, double f, double d0 = 1.0);

/// Joint least squares in (n1, n2) with the break distance held fixed.
PlFitReport fit_dual_ci(std::span<const PathLossSample> samples, double f, double d_break, double d0 = 1.0);

/// Joint least squares in (n1, n2) of the dual-slope CI-MTR model, break
/// distance from the link geometry. Samples on MTR interference nulls are
/// dropped from the design; more than 20 % dropped adds a warning.
PlFitReport fit_dual_ci_mtr(std::span<const PathLossSample> samples, const LinkGeometry& g, const SeaStateParams& sea);

/// RMS of measured minus model over all samples.
double shadow_sigma(std::span<const PathLossSample> samples, const std::function<double(double)>& model_db);

} // namespace mariner
