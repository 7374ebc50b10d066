// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

// Writes fixture weight files: identity-config or seeded random.

#include <CLI11.hpp>

#include <iostream>

#include "bbwe/error.hpp"
#include "bbwe/fixtures.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generate bbwe weight files"};
    std::string kind = "identity";
    std::string out;
    std::uint32_t seed = 1;
    app.add_option("--kind", kind)->check(CLI::IsMember({"identity", "random"}));
    app.add_option("--seed", seed);
    app.add_option("--out", out)->required();
    CLI11_PARSE(app, argc, argv);

    try {
        const auto w = kind == "identity" ? bbwe::model::identity_weights() : bbwe::model::random_weights({}, seed);
        bbwe::nn::write_weight_file(out, w);
        std::cout << "wrote " << out << " (" << w.param_count() << " params)\n";
    } catch (const bbwe::Error& e) {
        std::cerr << "error: " << e.contract() << ": " << e.what() << "\n";
        return 1;
    }
    return 0;
}
