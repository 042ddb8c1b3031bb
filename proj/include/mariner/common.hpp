// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mariner {

inline constexpr double kSpeedOfLight = 299'792'458.0;   // m/s
inline constexpr double kGravity = 9.81;                 // m/s^2, as used by the P-M spectrum
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Input outside the domain of a model (bad parameters, empty records, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure failed to produce an answer.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A loss in dB that may sit on an interference null or a zero of an antenna
/// pattern. Null values carry +inf and are flagged instead of thrown so that
/// sweeps keep running.
struct LossDb {
    double db = 0.0;
    bool null = false;

    static LossDb at_null() { return {kInf, true}; }
    explicit operator double() const { return db; }
};

inline void require(bool ok, const std::string& what)
{
    if (!ok)
        throw DomainError(what);
}

inline double db10(double linear) { return 10.0 * std::log10(linear); }
inline double db20(double linear) { return 20.0 * std::log10(linear); }
inline double from_db10(double db) { return std::pow(10.0, db / 10.0); }

} // namespace mariner
