// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#include "bbwe/features.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iterator>
#include <numbers>
#include <ostream>

#include "le_io.hpp"

namespace bbwe::features {

double erb_rate(double hz) { return 21.4 * std::log10(1.0 + 0.00437 * hz); }

double erb_rate_to_hz(double erb) { return (std::pow(10.0, erb / 21.4) - 1.0) / 0.00437; }

ErbBank::ErbBank() : weights_(kErbBands * dsp::kStftBins, 0.0f) {
    constexpr double kMaxHz = kRate16k / 2.0;
    constexpr double kBinHz = static_cast<double>(kRate16k) / dsp::kStftSize;

    // kErbBands + 2 edge points; band b spans points b .. b+2, center b+1.
    std::array<double, kErbBands + 2> points{};
    const double top = erb_rate(kMaxHz);
    for (std::size_t i = 0; i < points.size(); ++i) {
        points[i] = erb_rate_to_hz(top * static_cast<double>(i) / (kErbBands + 1));
    }

    for (std::size_t b = 0; b < kErbBands; ++b) {
        const double lo = points[b];
        const double mid = points[b + 1];
        const double hi = points[b + 2];
        centers_[b] = mid;
        std::vector<double> row(dsp::kStftBins, 0.0);
        double sum = 0.0;
        for (std::size_t k = 0; k < dsp::kStftBins; ++k) {
            const double f = kBinHz * static_cast<double>(k);
            double w = 0.0;
            if ((b == 0 && f <= mid) || (b == kErbBands - 1 && f >= mid)) {
                w = 1.0;
            } else if (f > lo && f <= mid) {
                w = (f - lo) / (mid - lo);
            } else if (f > mid && f < hi) {
                w = (hi - f) / (hi - mid);
            }
            row[k] = w;
            sum += w;
        }
        if (sum <= 0.0) {
            // Band narrower than the bin spacing: take the nearest bin.
            const auto k = static_cast<std::size_t>(std::lround(mid / kBinHz));
            row[std::min(k, dsp::kStftBins - 1)] = 1.0;
            sum = 1.0;
        }
        for (std::size_t k = 0; k < dsp::kStftBins; ++k) {
            weights_[b * dsp::kStftBins + k] = static_cast<float>(row[k] / sum);
        }
    }
}

const ErbBank& ErbBank::standard() {
    static const ErbBank bank;
    return bank;
}

std::array<float, kErbBands> erb_log_spectrum(std::span<const std::complex<float>> spectrum,
                                              const ErbBank& bank) {
    if (spectrum.size() != dsp::kStftBins) {
        throw InvalidInput("erb_log_spectrum: expected 161 bins");
    }
    std::array<double, dsp::kStftBins> power{};
    for (std::size_t k = 0; k < dsp::kStftBins; ++k) {
        power[k] = std::norm(std::complex<double>(spectrum[k]));
    }
    std::array<float, kErbBands> out{};
    for (std::size_t b = 0; b < kErbBands; ++b) {
        const auto row = bank.row(b);
        double energy = 0.0;
        for (std::size_t k = 0; k < dsp::kStftBins; ++k) {
            energy += static_cast<double>(row[k]) * power[k];
        }
        out[b] = static_cast<float>(std::log10(std::max(energy, kEnergyFloor)));
    }
    return out;
}

std::array<float, kIfBins> instantaneous_frequency(std::span<const std::complex<float>> current,
                                                   std::span<const std::complex<float>> previous) {
    if (current.size() < kIfBins || previous.size() < kIfBins) {
        throw InvalidInput("instantaneous_frequency: spectra need at least 40 bins");
    }
    std::array<float, kIfBins> out{};
    for (std::size_t k = 0; k < kIfBins; ++k) {
        const std::complex<double> p =
            std::complex<double>(current[k]) * std::conj(std::complex<double>(previous[k]));
        if (std::abs(p) < kPhasorEpsilon) {
            out[k] = 0.0f;
            continue;
        }
        auto v = static_cast<float>(std::arg(p) / std::numbers::pi);
        if (v >= 1.0f) {
            v = -1.0f;  // angle pi wraps to -pi
        }
        out[k] = v;
    }
    return out;
}

FeatureFrame FeatureExtractor::push(std::span<const float> frame) {
    if (frame.size() != kFrameSize) {
        throw InvalidInput("assemble_features: expected 160 samples, got " +
                           std::to_string(frame.size()));
    }
    std::copy(state_.history.begin(), state_.history.end(), window_.begin());
    std::copy(frame.begin(), frame.end(), window_.begin() + kFrameSize);
    stft_.frame(window_, spectrum_);

    FeatureFrame out;
    const auto erb = erb_log_spectrum(spectrum_);
    const auto inst = instantaneous_frequency(spectrum_, state_.previous);
    std::copy(erb.begin(), erb.end(), out.erb().begin());
    std::copy(inst.begin(), inst.end(), out.if_feat().begin());

    state_.previous = spectrum_;
    std::copy(frame.begin(), frame.end(), state_.history.begin());
    return out;
}

void FeatureExtractor::reset() { state_ = FeatureState{}; }

std::vector<FeatureFrame> extract_features(std::span<const float> x) {
    FeatureExtractor fx;
    std::vector<FeatureFrame> frames;
    frames.reserve(x.size() / kFrameSize);
    for (std::size_t pos = 0; pos + kFrameSize <= x.size(); pos += kFrameSize) {
        frames.push_back(fx.push(x.subspan(pos, kFrameSize)));
    }
    return frames;
}

void write_feature_dump(std::ostream& os, std::span<const FeatureFrame> frames) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(frames.size() * kFeatureDim * 4);
    for (const auto& f : frames) {
        for (float v : f.values) {
            detail::put_f32(bytes, v);
        }
    }
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) {
        throw IoError("failed writing feature dump");
    }
}

std::vector<FeatureFrame> read_feature_dump(std::istream& is) {
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    constexpr std::size_t kFrameBytes = kFeatureDim * 4;
    if (bytes.size() % kFrameBytes != 0) {
        throw FormatError("feature dump length is not a multiple of 288 bytes");
    }
    std::vector<FeatureFrame> frames(bytes.size() / kFrameBytes);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        for (std::size_t d = 0; d < kFeatureDim; ++d) {
            frames[i].values[d] = detail::load_f32(bytes.data() + i * kFrameBytes + 4 * d);
        }
    }
    return frames;
}

} // namespace bbwe::features
