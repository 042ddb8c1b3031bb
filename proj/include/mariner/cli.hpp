// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

// Command-line front end. Every run resolves flags and the optional JSON
// config into one effective config, executes the subcommand from that config
// alone, and records it in <out>/manifest.json so `replay` can re-run it.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mariner::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitValidation = 2;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

/// Toolkit version recorded in manifests.
std::string version();

} // namespace mariner::cli
