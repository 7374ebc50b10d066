// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bbwe/tensor.hpp"

namespace bbwe::nn {

// Weight file, little endian throughout:
//   "BBWE" | u32 version | u32 latent_dim | u32 tensor_count
//   per tensor: u16 name_len | name (UTF-8) | u8 ndims (1..3) | ndims x u32 | f32 data
inline constexpr char kWeightMagic[4] = {'B', 'B', 'W', 'E'};
inline constexpr std::uint32_t kWeightVersion = 1;

struct ModelWeights {
    std::uint32_t version = kWeightVersion;
    std::uint32_t latent_dim = 0;
    std::map<std::string, Tensor> tensors;
    std::vector<std::string> warnings;

    std::size_t param_count() const;
    // Throws ValidationError naming the tensor when absent.
    const Tensor& at(const std::string& name) const;
};

std::vector<std::uint8_t> serialize_weights(const ModelWeights& w);
// Structural decode only; throws FormatError on bad magic, version or truncation.
ModelWeights parse_weights(std::span<const std::uint8_t> bytes);

struct TensorSpec {
    std::string name;
    std::vector<std::size_t> dims;
};
using ShapeTable = std::vector<TensorSpec>;

// Checks every required tensor is present with the expected shape
// (ValidationError naming it otherwise). Unknown tensors are recorded in
// w.warnings.
void validate_weights(ModelWeights& w, const ShapeTable& table);

std::size_t count_params(const ModelWeights& w);

ModelWeights read_weight_file(const std::filesystem::path& path);
void write_weight_file(const std::filesystem::path& path, const ModelWeights& w);

} // namespace bbwe::nn
