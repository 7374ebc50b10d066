// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>

#include "bbwe/graph.hpp"
#include "bbwe/weights.hpp"

namespace bbwe::model {

// Every AdaConv a delta at the newest tap with unit gain (stage 1 copies its
// input to all lanes, stage 2 is diagonal, stage 3 keeps only the bypass
// lane) and every AdaShape unity. Encoder weights are zero.
nn::ModelWeights identity_weights(const ModelConfig& cfg = {});

// Uniform +-1/sqrt(fan_in) weights and small biases, reproducible per seed.
nn::ModelWeights random_weights(const ModelConfig& cfg = {}, std::uint32_t seed = 1);

} // namespace bbwe::model
