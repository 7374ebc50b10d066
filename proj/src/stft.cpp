// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bbwe/dsp.hpp"

namespace bbwe::dsp {

namespace {

// One plan shared by every Stft. Planning is not thread-safe in FFTW but
// executing a plan on caller-owned arrays is, so the plan is created once
// (unaligned, so any buffer works) and reused through the new-array API.
fftwf_plan shared_plan() {
    static const fftwf_plan plan = [] {
        std::vector<float> in(kStftSize);
        std::vector<std::complex<float>> out(kStftBins);
        return fftwf_plan_dft_r2c_1d(static_cast<int>(kStftSize), in.data(),
                                     reinterpret_cast<fftwf_complex*>(out.data()),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    }();
    return plan;
}

} // namespace

const std::array<float, kStftSize>& hann_window() {
    static const auto window = [] {
        std::array<float, kStftSize> w{};
        for (std::size_t n = 0; n < kStftSize; ++n) {
            w[n] = static_cast<float>(
                0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / kStftSize));
        }
        return w;
    }();
    return window;
}

Stft::Stft() : in_(kStftSize), out_(kStftBins) { shared_plan(); }

void Stft::frame(std::span<const float> window, Spectrum& out) {
    if (window.size() != kStftSize) {
        throw InvalidInput("stft_frame: expected 320 samples, got " + std::to_string(window.size()));
    }
    const auto& w = hann_window();
    for (std::size_t n = 0; n < kStftSize; ++n) {
        in_[n] = window[n] * w[n];
    }
    fftwf_execute_dft_r2c(shared_plan(), in_.data(), reinterpret_cast<fftwf_complex*>(out_.data()));
    std::copy(out_.begin(), out_.end(), out.begin());
}

Spectrum stft_frame(std::span<const float> window) {
    Stft stft;
    Spectrum out{};
    stft.frame(window, out);
    return out;
}

} // namespace bbwe::dsp
