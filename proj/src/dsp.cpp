// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#include "bbwe/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bbwe::dsp {

namespace {

// Allpass coefficients of the two polyphase branches, Q16.
constexpr std::array<float, 3> kAllpassEven = {
    1746.0f / 65536.0f, 14986.0f / 65536.0f, 39083.0f / 65536.0f};
constexpr std::array<float, 3> kAllpassOdd = {
    6854.0f / 65536.0f, 25769.0f / 65536.0f, 55542.0f / 65536.0f};

// 1.5x prototype at 96 kHz. Each phase sums to 1 (unit DC gain); passband
// 0-14 kHz, >= 43 dB rejection above 18 kHz.
constexpr std::array<float, 54> kInterpolator = {
    -2.654985315e-02f, -6.954718985e-02f, -1.080088363e-01f, -1.066198035e-01f,
    -5.365201895e-02f, 1.652604550e-02f,  3.877602059e-02f,  -2.667425028e-02f,
    -1.345696563e-01f, -1.608346966e-01f, 8.656013573e-03f,  3.709015640e-01f,
    7.675050844e-01f,  9.683574314e-01f,  8.353523293e-01f,  4.339730797e-01f,
    -3.239790307e-03f, -2.365536689e-01f, -1.854545972e-01f, 2.999546020e-02f,
    2.055287294e-01f,  2.173671559e-01f,  9.939599226e-02f,  -1.462608023e-02f,
    -2.388305274e-02f, 5.488507396e-02f,  1.229433126e-01f,  1.021803633e-01f,
    4.085026271e-03f,  -8.853778750e-02f, -1.049017444e-01f, -4.987625515e-02f,
    1.313195474e-02f,  2.848382293e-02f,  -3.768680488e-03f, -3.562285123e-02f,
    -2.479135405e-02f, 2.270732121e-02f,  6.481495953e-02f,  6.656969488e-02f,
    2.980607441e-02f,  -1.169739148e-02f, -2.716857462e-02f, -1.671449419e-02f,
    -2.604346325e-03f, -3.477556483e-03f, -1.840146248e-02f, -2.934644663e-02f,
    -2.146477596e-02f, 1.051716155e-03f,  2.246691806e-02f,  3.029078695e-02f,
    2.293403229e-02f,  9.901251565e-03f,
};

// Sinc cutoff placing the -3 dB point of the 15-tap window at 4 kHz.
constexpr double kLowpassDesignCutoff = 5250.0;

inline float allpass_chain(const std::array<float, 3>& coef, float* state, float v) {
    for (std::size_t s = 0; s < 3; ++s) {
        const float t = (v - state[s]) * coef[s];
        const float out = state[s] + t;
        state[s] = v + t;
        v = out;
    }
    return v;
}

} // namespace

// ---------------------------------------------------------------------------
// nonlinearity

double nonlin_extend(double x) {
    if (x == 0.0) {
        return 0.0;
    }
    return x * std::sin(std::log(std::fabs(x)));
}

float nonlin_extend(float x) {
    return static_cast<float>(nonlin_extend(static_cast<double>(x)));
}

void nonlin_extend(std::span<const float> in, std::span<float> out) {
    if (in.size() != out.size()) {
        throw InvalidInput("nonlin_extend: output size mismatch");
    }
    for (std::size_t i = 0; i < in.size(); ++i) {
        out[i] = nonlin_extend(in[i]);
    }
}

SampleBuffer nonlin_extend(const SampleBuffer& x) {
    SampleBuffer y(std::vector<float>(x.size()), x.rate);
    nonlin_extend(x.samples, y.samples);
    return y;
}

// ---------------------------------------------------------------------------
// 2x stage

FirApproximation iir_to_fir_approx(std::size_t max_len) {
    if (max_len < 64) {
        throw InvalidInput("iir_to_fir_approx: max_len must be >= 64");
    }
    // Long reference response to measure what truncation discards.
    const std::size_t ref_len = std::max<std::size_t>(8192, 4 * max_len);
    std::vector<float> impulse(ref_len / 2, 0.0f);
    impulse[0] = 1.0f;
    std::vector<float> response(ref_len);
    Upsampler2x iir(ResamplerMode::kIir);
    iir.process(impulse, response);

    double total = 0.0;
    double tail = 0.0;
    for (std::size_t n = 0; n < ref_len; ++n) {
        const double e = static_cast<double>(response[n]) * response[n];
        total += e;
        if (n >= max_len) {
            tail += e;
        }
    }

    FirApproximation fir;
    fir.taps.assign(response.begin(), response.begin() + static_cast<std::ptrdiff_t>(max_len));
    fir.tail_db = tail > 0.0 ? 10.0 * std::log10(tail / total) : -300.0;
    if (fir.tail_db > -60.0) {
        fir.warning = "fir approximation with " + std::to_string(max_len) +
                      " taps leaves a " + std::to_string(fir.tail_db) +
                      " dB tail (> -60 dB); increase max_len";
    }
    return fir;
}

Upsampler2x::Upsampler2x(ResamplerMode mode, std::size_t fir_length) : mode_(mode) {
    if (mode_ == ResamplerMode::kFir) {
        const auto fir = iir_to_fir_approx(fir_length);
        const std::size_t half = (fir.taps.size() + 1) / 2;
        even_taps_.assign(half, 0.0f);
        odd_taps_.assign(half, 0.0f);
        for (std::size_t n = 0; n < fir.taps.size(); ++n) {
            (n % 2 == 0 ? even_taps_ : odd_taps_)[n / 2] = fir.taps[n];
        }
        history_.assign(half - 1, 0.0f);
    }
}

void Upsampler2x::reset() {
    iir_state_.fill(0.0f);
    std::fill(history_.begin(), history_.end(), 0.0f);
}

void Upsampler2x::process(std::span<const float> in, std::span<float> out) {
    if (out.size() != 2 * in.size()) {
        throw InvalidInput("upsample2x: output must hold 2x the input length");
    }
    if (mode_ == ResamplerMode::kIir) {
        process_iir(in, out);
    } else {
        process_fir(in, out);
    }
}

SampleBuffer Upsampler2x::process(const SampleBuffer& in) {
    require_rate(in, kRate16k, "upsample2x");
    SampleBuffer out(std::vector<float>(2 * in.size()), kRate32k);
    process(in.samples, out.samples);
    return out;
}

void Upsampler2x::process_iir(std::span<const float> in, std::span<float> out) {
    float* even_state = iir_state_.data();
    float* odd_state = iir_state_.data() + 3;
    for (std::size_t k = 0; k < in.size(); ++k) {
        out[2 * k] = allpass_chain(kAllpassEven, even_state, in[k]);
        out[2 * k + 1] = allpass_chain(kAllpassOdd, odd_state, in[k]);
    }
}

void Upsampler2x::process_fir(std::span<const float> in, std::span<float> out) {
    const std::size_t hist = history_.size();
    const std::size_t taps = even_taps_.size();
    scratch_.resize(hist + in.size());
    std::copy(history_.begin(), history_.end(), scratch_.begin());
    std::copy(in.begin(), in.end(), scratch_.begin() + static_cast<std::ptrdiff_t>(hist));

    for (std::size_t k = 0; k < in.size(); ++k) {
        const float* newest = scratch_.data() + hist + k;
        float even = 0.0f;
        float odd = 0.0f;
        for (std::size_t q = 0; q < taps; ++q) {
            even += even_taps_[q] * newest[-static_cast<std::ptrdiff_t>(q)];
            odd += odd_taps_[q] * newest[-static_cast<std::ptrdiff_t>(q)];
        }
        out[2 * k] = even;
        out[2 * k + 1] = odd;
    }
    std::copy(scratch_.end() - static_cast<std::ptrdiff_t>(hist), scratch_.end(), history_.begin());
}

// ---------------------------------------------------------------------------
// 1.5x stage

std::span<const float> Upsampler15x::prototype() { return kInterpolator; }

Upsampler15x::Upsampler15x() {
    for (std::size_t p = 0; p < kPhases; ++p) {
        for (std::size_t q = 0; q < kTapsPerPhase; ++q) {
            phase_taps_[p][q] = kInterpolator[p + kPhases * q];
        }
    }
}

void Upsampler15x::reset() {
    history_.fill(0.0f);
    odd_ = false;
}

std::size_t Upsampler15x::output_size(std::size_t n) const {
    const std::size_t consumed = odd_ ? 1 : 0;
    return 3 * (consumed + n) / 2 - 3 * consumed / 2;
}

std::size_t Upsampler15x::process(std::span<const float> in, std::span<float> out) {
    const std::size_t count = output_size(in.size());
    if (out.size() < count) {
        throw InvalidInput("upsample15x: output buffer too small");
    }
    const std::size_t hist = history_.size();
    scratch_.resize(hist + in.size());
    std::copy(history_.begin(), history_.end(), scratch_.begin());
    std::copy(in.begin(), in.end(), scratch_.begin() + static_cast<std::ptrdiff_t>(hist));

    auto filter = [&](std::size_t phase, std::size_t newest) {
        const auto& taps = phase_taps_[phase];
        const float* x = scratch_.data() + newest;
        float acc = 0.0f;
        for (std::size_t q = 0; q < kTapsPerPhase; ++q) {
            acc += taps[q] * x[-static_cast<std::ptrdiff_t>(q)];
        }
        return acc;
    };

    // Input 2a yields output 3a (phase 0); input 2a+1 yields outputs 3a+1
    // (phase 2, newest input 2a) and 3a+2 (phase 1, newest input 2a+1).
    std::size_t written = 0;
    bool odd = odd_;
    for (std::size_t j = 0; j < in.size(); ++j) {
        const std::size_t pos = hist + j;
        if (!odd) {
            out[written++] = filter(0, pos);
        } else {
            out[written++] = filter(2, pos - 1);
            out[written++] = filter(1, pos);
        }
        odd = !odd;
    }
    odd_ = odd;
    std::copy(scratch_.end() - static_cast<std::ptrdiff_t>(hist), scratch_.end(), history_.begin());
    return written;
}

SampleBuffer Upsampler15x::process(const SampleBuffer& in) {
    require_rate(in, kRate32k, "upsample15x");
    SampleBuffer out(std::vector<float>(output_size(in.size())), kRate48k);
    process(in.samples, out.samples);
    return out;
}

int measure_cascade_delay(ResamplerMode mode) {
    constexpr std::size_t kLen = 64;
    constexpr std::size_t kPos = 16;
    std::vector<float> x(kLen, 0.0f);
    x[kPos] = 1.0f;
    std::vector<float> y32(2 * kLen);
    Upsampler2x up2(mode);
    up2.process(x, y32);
    Upsampler15x up15;
    std::vector<float> y48(up15.output_size(y32.size()));
    up15.process(y32, y48);
    std::size_t peak = 0;
    for (std::size_t i = 1; i < y48.size(); ++i) {
        if (std::fabs(y48[i]) > std::fabs(y48[peak])) {
            peak = i;
        }
    }
    return static_cast<int>(peak) - static_cast<int>(3 * kPos);
}

// ---------------------------------------------------------------------------
// lowpass

const std::array<float, kLowpassTaps>& lowpass_4k_taps() {
    static const auto taps = [] {
        std::array<double, kLowpassTaps> h{};
        const double half = (kLowpassTaps - 1) / 2.0;
        const double wc = 2.0 * kLowpassDesignCutoff / kRate48k;
        double sum = 0.0;
        for (std::size_t n = 0; n < kLowpassTaps; ++n) {
            const double t = static_cast<double>(n) - half;
            const double arg = std::numbers::pi * wc * t;
            const double sinc = t == 0.0 ? 1.0 : std::sin(arg) / arg;
            const double window =
                0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (kLowpassTaps - 1));
            h[n] = sinc * window;
            sum += h[n];
        }
        std::array<float, kLowpassTaps> out{};
        for (std::size_t n = 0; n < kLowpassTaps; ++n) {
            out[n] = static_cast<float>(h[n] / sum);
        }
        return out;
    }();
    return taps;
}

namespace {

std::size_t reflect_index(std::ptrdiff_t i, std::size_t len) {
    if (len == 1) {
        return 0;
    }
    const auto period = static_cast<std::ptrdiff_t>(2 * (len - 1));
    i %= period;
    if (i < 0) {
        i += period;
    }
    if (i >= static_cast<std::ptrdiff_t>(len)) {
        i = period - i;
    }
    return static_cast<std::size_t>(i);
}

} // namespace

std::vector<float> lowpass_4k(std::span<const float> x) {
    const auto& h = lowpass_4k_taps();
    constexpr auto half = static_cast<std::ptrdiff_t>(kLowpassTaps / 2);
    std::vector<float> y(x.size(), 0.0f);
    const auto len = static_cast<std::ptrdiff_t>(x.size());
    for (std::ptrdiff_t t = 0; t < len; ++t) {
        float acc = 0.0f;
        for (std::ptrdiff_t j = -half; j <= half; ++j) {
            const std::ptrdiff_t idx = t + j;
            const float v = (idx >= 0 && idx < len) ? x[static_cast<std::size_t>(idx)]
                                                    : x[reflect_index(idx, x.size())];
            acc += h[static_cast<std::size_t>(j + half)] * v;
        }
        y[static_cast<std::size_t>(t)] = acc;
    }
    return y;
}

SampleBuffer lowpass_4k(const SampleBuffer& x) {
    require_rate(x, kRate48k, "lowpass_4k");
    return SampleBuffer(lowpass_4k(std::span<const float>(x.samples)), x.rate);
}

} // namespace bbwe::dsp
