// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "bbwe/dsp.hpp"

namespace bbwe::features {

inline constexpr std::size_t kErbBands = 32;
inline constexpr std::size_t kIfBins = 40;
inline constexpr std::size_t kFeatureDim = kErbBands + kIfBins;  // 72
inline constexpr std::size_t kFrameSize = dsp::kStftHop;         // 10 ms at 16 kHz

inline constexpr double kEnergyFloor = 1e-9;
inline constexpr double kPhasorEpsilon = 1e-12;

// [erb log energies (32) | normalized phase advances (40)]
struct FeatureFrame {
    std::array<float, kFeatureDim> values{};

    std::span<float, kErbBands> erb() { return std::span(values).first<kErbBands>(); }
    std::span<const float, kErbBands> erb() const { return std::span(values).first<kErbBands>(); }
    std::span<float, kIfBins> if_feat() { return std::span(values).last<kIfBins>(); }
    std::span<const float, kIfBins> if_feat() const { return std::span(values).last<kIfBins>(); }

    bool operator==(const FeatureFrame&) const = default;
};

// ERB-rate (Glasberg & Moore): 21.4 log10(1 + 0.00437 f).
double erb_rate(double hz);
double erb_rate_to_hz(double erb);

// 32 triangular bands with centers uniformly spaced in ERB-rate over
// 0-8 kHz. The outermost bands are shoulders so every bin is covered. Each
// row sums to one.
class ErbBank {
public:
    ErbBank();
    static const ErbBank& standard();

    float weight(std::size_t band, std::size_t bin) const { return weights_[band * dsp::kStftBins + bin]; }
    std::span<const float> row(std::size_t band) const {
        return std::span(weights_).subspan(band * dsp::kStftBins, dsp::kStftBins);
    }
    double center_hz(std::size_t band) const { return centers_[band]; }

private:
    std::vector<float> weights_;
    std::array<double, kErbBands> centers_{};
};

// out[b] = log10(max(sum_k bank[b,k] |X(k)|^2, 1e-9)); X must have 161 bins.
std::array<float, kErbBands> erb_log_spectrum(std::span<const std::complex<float>> spectrum,
                                              const ErbBank& bank = ErbBank::standard());

// angle(X_n(k) X_prev(k)^*) / pi for k < 40, in [-1, 1); 0 when the product
// magnitude is below 1e-12.
std::array<float, kIfBins> instantaneous_frequency(std::span<const std::complex<float>> current,
                                                   std::span<const std::complex<float>> previous);

struct FeatureState {
    std::array<float, kFrameSize> history{};
    dsp::Spectrum previous{};
};

// Streaming extractor: one FeatureFrame per 160 new samples.
class FeatureExtractor {
public:
    FeatureFrame push(std::span<const float> frame);
    void reset();
    const FeatureState& state() const { return state_; }

private:
    FeatureState state_;
    dsp::Stft stft_;
    std::array<float, dsp::kStftSize> window_{};
    dsp::Spectrum spectrum_{};
};

// Features of every complete 160-sample frame of x, from a reset state.
std::vector<FeatureFrame> extract_features(std::span<const float> x);

// Feature dump: 72 little-endian float32 per frame, frames concatenated.
void write_feature_dump(std::ostream& os, std::span<const FeatureFrame> frames);
std::vector<FeatureFrame> read_feature_dump(std::istream& is);

} // namespace bbwe::features
