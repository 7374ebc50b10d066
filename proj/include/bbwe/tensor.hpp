// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace bbwe::nn {

// Row-major float tensor of rank 1..3.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> dims);
    Tensor(std::vector<std::size_t> dims, std::vector<float> data);

    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t rank() const { return dims_.size(); }
    std::size_t dim(std::size_t i) const { return dims_.at(i); }
    std::size_t size() const { return data_.size(); }

    std::span<float> data() { return data_; }
    std::span<const float> data() const { return data_; }

    float& operator()(std::size_t i) { return data_[i]; }
    float operator()(std::size_t i) const { return data_[i]; }
    float& operator()(std::size_t i, std::size_t j) { return data_[i * dims_[1] + j]; }
    float operator()(std::size_t i, std::size_t j) const { return data_[i * dims_[1] + j]; }
    float& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(i * dims_[1] + j) * dims_[2] + k];
    }
    float operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * dims_[1] + j) * dims_[2] + k];
    }

    bool has_dims(const std::vector<std::size_t>& dims) const { return dims_ == dims; }
    std::string shape_string() const;

    bool operator==(const Tensor&) const = default;

private:
    std::vector<std::size_t> dims_;
    std::vector<float> data_;
};

std::string shape_string(const std::vector<std::size_t>& dims);

} // namespace bbwe::nn
