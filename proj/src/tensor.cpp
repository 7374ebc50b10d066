// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#include "bbwe/tensor.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "bbwe/error.hpp"

namespace bbwe::nn {

namespace {

std::size_t element_count(const std::vector<std::size_t>& dims) {
    if (dims.empty() || dims.size() > 3) {
        throw InvalidInput("tensor rank must be 1..3, got " + std::to_string(dims.size()));
    }
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

} // namespace

Tensor::Tensor(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    data_.assign(element_count(dims_), 0.0f);
}

Tensor::Tensor(std::vector<std::size_t> dims, std::vector<float> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
    if (element_count(dims_) != data_.size()) {
        throw InvalidInput("tensor data length " + std::to_string(data_.size()) +
                           " does not match shape " + nn::shape_string(dims_));
    }
    for (float v : data_) {
        if (!std::isfinite(v)) {
            throw InvalidInput("tensor contains non-finite values");
        }
    }
}

std::string Tensor::shape_string() const { return nn::shape_string(dims_); }

std::string shape_string(const std::vector<std::size_t>& dims) {
    std::string s = "[";
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) {
            s += "x";
        }
        s += std::to_string(dims[i]);
    }
    return s + "]";
}

} // namespace bbwe::nn
