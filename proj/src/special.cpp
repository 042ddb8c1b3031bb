// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#include "mariner/special.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include <cmath>

namespace mariner::special {

namespace {

// GSL aborts on error by default; the callers here only feed finite inputs,
// and a range error is reported through the return value instead.
const bool gsl_quiet = [] {
    gsl_set_error_handler_off();
    return true;
}();

} // namespace

double bessel_i0e(double x)
{
    (void)gsl_quiet;
    return gsl_sf_bessel_I0_scaled(x);
}

double bessel_i1e(double x) { return gsl_sf_bessel_I1_scaled(x); }

double log_bessel_i0(double x) { return std::abs(x) + std::log(bessel_i0e(x)); }

double bessel_ratio_i1_i0(double x)
{
    const double den = bessel_i0e(x);
    return den > 0.0 ? bessel_i1e(x) / den : 0.0;
}

} // namespace mariner::special
