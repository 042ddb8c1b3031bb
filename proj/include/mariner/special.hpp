// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#pragma once

namespace mariner::special {

/// Exponentially scaled modified Bessel function exp(-|x|) * I0(x).
double bessel_i0e(double x);

/// exp(-|x|) * I1(x)
double bessel_i1e(double x);

/// log I0(x), finite for any finite x.
double log_bessel_i0(double x);

/// I1(x) / I0(x) without overflow.
double bessel_ratio_i1_i0(double x);

} // namespace mariner::special
