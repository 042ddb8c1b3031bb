// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#include "mariner/cli.hpp"

int main(int argc, char** argv) { return mariner::cli::run(argc, argv); }
