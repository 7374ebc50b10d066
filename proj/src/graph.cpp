// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#include "bbwe/graph.hpp"

#include "bbwe/dsp.hpp"
#include "bbwe/features.hpp"

namespace bbwe::model {

const std::array<nn::AdaConvSpec, kStages>& stages() {
    static const std::array<nn::AdaConvSpec, kStages> specs = {{
        {1, 3, 15, kRate16k},
        {3, 3, 25, kRate32k},
        {3, 1, 15, kRate48k},
    }};
    return specs;
}

std::string adaconv_prefix(std::size_t stage) { return "sig.adaconv" + std::to_string(stage + 1); }

std::string adashape_prefix(std::size_t index) { return "sig.adashape" + std::to_string(index + 1); }

nn::ShapeTable shape_table(const ModelConfig& cfg) {
    const std::size_t L = cfg.latent_dim;
    const std::size_t C = cfg.conv_width;
    const std::size_t F = features::kFeatureDim;
    nn::ShapeTable t = {
        {"enc.conv1.weight", {C, F, 3}},
        {"enc.conv1.bias", {C}},
        {"enc.conv2.weight", {C, C, 3}},
        {"enc.conv2.bias", {C}},
        {"enc.tconv.weight", {C, L, 2}},
        {"enc.tconv.bias", {L}},
        {"enc.gru.weight_ih", {3 * L, L}},
        {"enc.gru.weight_hh", {3 * L, L}},
        {"enc.gru.bias_ih", {3 * L}},
        {"enc.gru.bias_hh", {3 * L}},
    };
    for (std::size_t s = 0; s < kStages; ++s) {
        const auto& spec = stages()[s];
        const auto p = adaconv_prefix(s);
        t.push_back({p + ".kernel.weight", {spec.kernel_elements(), L}});
        t.push_back({p + ".kernel.bias", {spec.kernel_elements()}});
        t.push_back({p + ".gain.weight", {spec.out_channels, L}});
        t.push_back({p + ".gain.bias", {spec.out_channels}});
    }
    for (std::size_t i = 0; i < kShapeSubframes.size(); ++i) {
        const auto p = adashape_prefix(i);
        const std::size_t H = cfg.shape_hidden;
        t.push_back({p + ".hidden.weight", {H, L + 1}});
        t.push_back({p + ".hidden.bias", {H}});
        t.push_back({p + ".out.weight", {kShapeSubframes[i], H}});
        t.push_back({p + ".out.bias", {kShapeSubframes[i]}});
    }
    return t;
}

std::size_t expected_params(const ModelConfig& cfg) {
    std::size_t n = 0;
    for (const auto& spec : shape_table(cfg)) {
        std::size_t size = 1;
        for (auto d : spec.dims) {
            size *= d;
        }
        n += size;
    }
    return n;
}

nn::CostGraph cost_graph(const ModelConfig& cfg) {
    const auto L = static_cast<double>(cfg.latent_dim);
    const auto C = static_cast<double>(cfg.conv_width);
    const auto H = static_cast<double>(cfg.shape_hidden);
    const auto F = static_cast<double>(features::kFeatureDim);
    const double frame_rate = 100.0;
    const double latent_rate = nn::kAdaptationRate;
    const double bins = dsp::kStftBins;

    nn::CostGraph g;
    // real FFT as 2.5 N log2 N, window, power, log, phasor products
    g.push_back({"features", frame_rate, features::kErbBands * bins, 6656.0 + 320.0 + 3.0 * bins + 40.0 * 7.0});

    // bias add + tanh
    g.push_back({"enc.conv1", frame_rate, C * F * 3.0, 2.0 * C});
    g.push_back({"enc.conv2", frame_rate, C * C * 3.0, 2.0 * C});
    g.push_back({"enc.tconv", frame_rate, 2.0 * L * C, 4.0 * L});
    // two sigmoids, a tanh, gate products and the convex update
    g.push_back({"enc.gru", latent_rate, 6.0 * L * L, 13.0 * L});

    for (std::size_t s = 0; s < kStages; ++s) {
        const auto& spec = stages()[s];
        const auto n = static_cast<double>(spec.kernel_elements());
        const auto co = static_cast<double>(spec.out_channels);
        const auto ci = static_cast<double>(spec.in_channels);
        const auto p = adaconv_prefix(s);
        // kernel and gain predictors, then L2 normalization and exp gain
        g.push_back({p + ".predict", latent_rate, L * n + n + L * co, 2.0 * n + 2.0 * co});
        // filtering with the old and new kernel, crossfade, channel sum
        g.push_back({p + ".filter", static_cast<double>(spec.rate), 2.0 * n, 3.0 * co * ci + co * (ci - 1.0)});
    }
    for (std::size_t i = 0; i < kShapeSubframes.size(); ++i) {
        const auto T = static_cast<double>(kShapeSubframes[i]);
        // rms, hidden tanh, exp gains, elementwise product
        g.push_back({adashape_prefix(i), latent_rate, (L + 1.0) * H + T + H * T, 2.0 * H + 2.0 + 3.0 * T});
    }
    // three lanes per resampler stage; allpass sections 1 MAC + 2 adds each
    g.push_back({"up2x", 3.0 * kRate16k, 6.0, 12.0});
    g.push_back({"up1.5x", 3.0 * kRate48k, 18.0, 0.0});
    g.push_back({"nonlin32", kRate32k, 0.0, 3.0});
    g.push_back({"nonlin48", kRate48k, 0.0, 3.0});
    return g;
}

} // namespace bbwe::model
