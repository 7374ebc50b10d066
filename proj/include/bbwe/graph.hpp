// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "bbwe/complexity.hpp"
#include "bbwe/nn.hpp"
#include "bbwe/weights.hpp"

namespace bbwe::model {

inline constexpr std::size_t kParamMin = 296000;
inline constexpr std::size_t kParamMax = 444000;
inline constexpr double kMflopsMin = 110.0;
inline constexpr double kMflopsMax = 170.0;

struct ModelConfig {
    std::size_t latent_dim = 128;  // GRU / TConv width
    std::size_t conv_width = 160;  // encoder Conv layers
    std::size_t shape_hidden = 64;
};

inline constexpr std::size_t kStages = 3;
inline constexpr std::size_t kLanes = 3;

// AdaConv k=15 @16k (1->3), k=25 @32k (3->3), k=15 @48k (3->1).
const std::array<nn::AdaConvSpec, kStages>& stages();

// AdaShape subframes after the 2x and 1.5x upsamplers.
inline constexpr std::array<std::size_t, 2> kShapeSubframes = {160, 240};

std::string adaconv_prefix(std::size_t stage);   // "sig.adaconv1" ...
std::string adashape_prefix(std::size_t index);  // "sig.adashape1" ...

nn::ShapeTable shape_table(const ModelConfig& cfg);
std::size_t expected_params(const ModelConfig& cfg);

// Per-second operation counts of the streaming engine at its native rates.
nn::CostGraph cost_graph(const ModelConfig& cfg);

} // namespace bbwe::model
