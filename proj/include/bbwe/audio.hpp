// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>
#include <vector>

#include "bbwe/error.hpp"

namespace bbwe {

inline constexpr int kRate16k = 16000;
inline constexpr int kRate32k = 32000;
inline constexpr int kRate48k = 48000;

inline bool is_supported_rate(int rate) {
    return rate == kRate16k || rate == kRate32k || rate == kRate48k;
}

// Mono audio at one of the three engine rates, nominally in [-1, 1].
struct SampleBuffer {
    std::vector<float> samples;
    int rate = kRate16k;

    SampleBuffer() = default;
    SampleBuffer(std::vector<float> s, int r) : samples(std::move(s)), rate(r) {
        if (!is_supported_rate(r)) {
            throw InvalidInput("unsupported sample rate " + std::to_string(r));
        }
    }

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

inline void require_rate(const SampleBuffer& buf, int rate, const char* op) {
    if (buf.rate != rate) {
        throw InvalidInput(std::string(op) + ": expected " + std::to_string(rate) +
                           " Hz input, got " + std::to_string(buf.rate) + " Hz");
    }
}

} // namespace bbwe
