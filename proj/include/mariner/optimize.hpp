// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#pragma once

#include <functional>
#include <vector>

namespace mariner::optimize {

struct NelderMeadOptions {
    int max_evaluations = 2000;
    double x_tolerance = 1e-9;    // simplex diameter
    double initial_step = 0.1;
};

struct MinimizeResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Unconstrained Nelder-Mead minimization. Callers map bounded parameters
/// onto the real line themselves.
MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                           std::vector<double> start,
                           const NelderMeadOptions& opt = {});

/// Adaptive Gauss-Kronrod quadrature of f over [a, b]. Stops once the error
/// estimate is below max(abs_tol, rel_tol * |result|).
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol, double rel_tol = 0.0);

} // namespace mariner::optimize
