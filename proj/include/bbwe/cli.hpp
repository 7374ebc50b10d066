// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace bbwe::cli {

struct CliConfig {
    std::filesystem::path input;
    std::filesystem::path output;
    std::filesystem::path weights;
    std::string mode = "extend";  // extend | decompose | report | features
    std::size_t chunk = 1;        // frames per read
    bool fir = false;
};

// Failures print "error: <contract>: <message>" to err and return nonzero.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

// Parses flags and calls run(). Usage errors exit with 2.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "out.wav" + "bypass" -> "out.bypass.wav"
std::filesystem::path suffixed(const std::filesystem::path& path, const std::string& tag);

} // namespace bbwe::cli
