// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

// File formats: headed CSV with round-trip decimal numbers, the MCIQ1 binary
// IQ container, SHA-256 digests, and JSON encodings of analysis results.

#pragma once

#include "mariner/geometry.hpp"
#include "mariner/plfit.hpp"
#include "mariner/seastate.hpp"
#include "mariner/smallscale.hpp"
#include "mariner/sounder.hpp"
#include "mariner/sparsity.hpp"
#include "mariner/swift.hpp"
#include "mariner/temporal.hpp"

#include <json.hpp>

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mariner::io {

using json = nlohmann::json;

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest decimal form that parses back to the same double ("inf", "nan"
/// for non-finite values).
std::string format_double(double v);
double parse_double(std::string_view text);

/// Reads a CSV whose header must equal `header`; returns one vector per column.
std::vector<std::vector<double>> read_csv(const std::filesystem::path& path, const std::vector<std::string>& header);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

// Schemas: d_m,pl_db / delay_ns,power_linear / amplitude / t_s,fading_db /
// bin_center_db,density.
std::vector<PathLossSample> read_pathloss_csv(const std::filesystem::path& path);
void write_pathloss_csv(const std::filesystem::path& path, std::span<const double> d_m, std::span<const double> pl_db);
PdpRecord read_pdp_csv(const std::filesystem::path& path);
void write_pdp_csv(const std::filesystem::path& path, const PdpRecord& p);
std::vector<double> read_envelope_csv(const std::filesystem::path& path);
void write_envelope_csv(const std::filesystem::path& path, std::span<const double> amplitude);
void write_swift_csv(const std::filesystem::path& path, std::span<const double> t_s, std::span<const double> fading_db);
/// Returns {t_s, fading_db}.
std::pair<std::vector<double>, std::vector<double>> read_swift_csv(const std::filesystem::path& path);
void write_histogram_csv(const std::filesystem::path& path, const Histogram& h);

/// MCIQ1 layout, little-endian: "MCIQ1", three zero bytes, uint64 sample
/// count, then count (I, Q) float64 pairs.
void write_iq(const std::filesystem::path& path, std::span<const cplx> samples);
std::vector<cplx> read_iq(const std::filesystem::path& path);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

json to_json(const ThresholdDistances& t);
json to_json(const HarmonicSet& h);
json to_json(const FadingModel& m);
json to_json(const FitReport& r);
json to_json(const PlFitReport& r);
json to_json(const SparsityMetrics& m);
json to_json(const LemmaCheckReport& r);
json to_json(const DelayStats& s);
json to_json(const ExpPdpFit& f);

/// Builds a model from {"family": name, <parameters>}; missing parameters
/// take the struct defaults.
FadingModel fading_model_from_json(const json& j);

} // namespace mariner::io
