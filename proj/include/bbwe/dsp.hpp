// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bbwe/audio.hpp"

namespace bbwe::dsp {

// ---------------------------------------------------------------------------
// Bandwidth-extending nonlinearity f(x) = x * sin(log|x|), f(0) = 0.
//
// Evaluated in double and rounded once, so |f(x)| <= |x| and f(-x) = -f(x)
// hold exactly for float inputs.
// ---------------------------------------------------------------------------
double nonlin_extend(double x);
float nonlin_extend(float x);
// in and out may alias.
void nonlin_extend(std::span<const float> in, std::span<float> out);
SampleBuffer nonlin_extend(const SampleBuffer& x);

// ---------------------------------------------------------------------------
// 16 -> 32 -> 48 kHz upsampler.
//
// The 2x stage is a polyphase pair of third-order allpass chains (even
// output samples from one chain, odd from the other). For training parity it
// can instead run the truncated impulse response of the same filter as a
// long FIR. The 1.5x stage is an 18-tap-per-phase polyphase FIR, tuned
// with the 2x stage so the cascade impulse peaks exactly 13 samples late at
// 48 kHz. Cascade magnitude stays within 2 dB over 0-7 kHz; group delay
// rises toward 8 kHz.
// ---------------------------------------------------------------------------
enum class ResamplerMode { kIir, kFir };

inline constexpr std::size_t kDefaultFirLength = 256;
inline constexpr int kCascadeDelay48 = 13;

struct FirApproximation {
    std::vector<float> taps;  // impulse response of the 2x filter at 32 kHz
    double tail_db = 0.0;     // energy discarded by truncation, relative to total
    std::string warning;      // non-empty when tail_db > -60 dB
};

// Truncated impulse response of the 2x-stage IIR filter. Throws InvalidInput
// for max_len < 64.
FirApproximation iir_to_fir_approx(std::size_t max_len = kDefaultFirLength);

// Transfer function of the 2x filter (upsampled domain) at z = 1.
inline constexpr double kUpsampler2xDcGain = 2.0;

class Upsampler2x {
public:
    explicit Upsampler2x(ResamplerMode mode = ResamplerMode::kIir,
                         std::size_t fir_length = kDefaultFirLength);

    // out.size() must equal 2 * in.size().
    void process(std::span<const float> in, std::span<float> out);
    SampleBuffer process(const SampleBuffer& in);

    void reset();
    ResamplerMode mode() const { return mode_; }

private:
    void process_iir(std::span<const float> in, std::span<float> out);
    void process_fir(std::span<const float> in, std::span<float> out);

    ResamplerMode mode_;
    std::array<float, 6> iir_state_{};
    std::vector<float> even_taps_;
    std::vector<float> odd_taps_;
    std::vector<float> history_;  // last even_taps_.size() - 1 inputs
    std::vector<float> scratch_;
};

class Upsampler15x {
public:
    static constexpr std::size_t kPhases = 3;
    static constexpr std::size_t kTapsPerPhase = 18;

    // Prototype lowpass at 96 kHz; phase p uses taps p, p + 3, p + 6, ...
    static std::span<const float> prototype();

    Upsampler15x();

    // floor(3 * (consumed + n) / 2) - floor(3 * consumed / 2): the
    // fractional output phase is carried between calls.
    std::size_t output_size(std::size_t n) const;

    // out.size() must be at least output_size(in.size()); returns the count.
    std::size_t process(std::span<const float> in, std::span<float> out);
    SampleBuffer process(const SampleBuffer& in);

    void reset();

private:
    std::array<std::array<float, kTapsPerPhase>, kPhases> phase_taps_{};
    std::array<float, kTapsPerPhase - 1> history_{};
    bool odd_ = false;  // parity of the number of inputs consumed so far
    std::vector<float> scratch_;
};

// Offset of the output peak at 48 kHz for an impulse at 16 kHz index m,
// minus 3m, through fresh 2x and 1.5x stages.
int measure_cascade_delay(ResamplerMode mode = ResamplerMode::kFir);

// ---------------------------------------------------------------------------
// 15-tap zero-phase lowpass (-3 dB at 4 kHz for 48 kHz signals), Hamming
// windowed sinc with unit DC gain. Edges are padded by reflection.
// ---------------------------------------------------------------------------
inline constexpr std::size_t kLowpassTaps = 15;
const std::array<float, kLowpassTaps>& lowpass_4k_taps();
std::vector<float> lowpass_4k(std::span<const float> x);
SampleBuffer lowpass_4k(const SampleBuffer& x);

// ---------------------------------------------------------------------------
// STFT front end: 20 ms periodic Hann window at 16 kHz, FFT size 320.
// ---------------------------------------------------------------------------
inline constexpr std::size_t kStftSize = 320;
inline constexpr std::size_t kStftBins = kStftSize / 2 + 1;
inline constexpr std::size_t kStftHop = 160;

using Spectrum = std::array<std::complex<float>, kStftBins>;

const std::array<float, kStftSize>& hann_window();

// Windowed DFT bins 0..160 of exactly 320 samples.
class Stft {
public:
    Stft();
    void frame(std::span<const float> window, Spectrum& out);

private:
    std::vector<float> in_;
    std::vector<std::complex<float>> out_;
};

Spectrum stft_frame(std::span<const float> window);

} // namespace bbwe::dsp
