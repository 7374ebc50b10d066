// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#include "bbwe/fixtures.hpp"

#include <cmath>
#include <random>

namespace bbwe::model {

namespace {

nn::ModelWeights zeros(const ModelConfig& cfg) {
    nn::ModelWeights w;
    w.latent_dim = static_cast<std::uint32_t>(cfg.latent_dim);
    for (const auto& spec : shape_table(cfg)) {
        w.tensors.emplace(spec.name, nn::Tensor(spec.dims));
    }
    return w;
}

} // namespace

nn::ModelWeights identity_weights(const ModelConfig& cfg) {
    auto w = zeros(cfg);
    for (std::size_t s = 0; s < kStages; ++s) {
        const auto& spec = stages()[s];
        auto& bias = w.tensors.at(adaconv_prefix(s) + ".kernel.bias");
        const std::size_t k = spec.kernel_size;
        for (std::size_t o = 0; o < spec.out_channels; ++o) {
            const std::size_t c = spec.in_channels == 1 ? 0 : o;
            bias((o * spec.in_channels + c) * k + k - 1) = 1.0f;
        }
    }
    return w;
}

nn::ModelWeights random_weights(const ModelConfig& cfg, std::uint32_t seed) {
    auto w = zeros(cfg);
    std::mt19937 rng(seed);
    for (auto& [name, t] : w.tensors) {
        float bound = 0.1f;
        if (t.rank() >= 2) {
            const std::size_t fan_in = t.size() / t.dim(0);
            bound = 1.0f / std::sqrt(static_cast<float>(fan_in));
        }
        std::uniform_real_distribution<float> dist(-bound, bound);
        for (float& v : t.data()) {
            v = dist(rng);
        }
    }
    return w;
}

} // namespace bbwe::model
