// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <vector>

#include "bbwe/audio.hpp"

namespace bbwe::wav {

enum class SampleFormat { kPcm16, kFloat32 };

struct WavInfo {
    int rate = 0;
    int channels = 0;
    SampleFormat format = SampleFormat::kFloat32;
    std::uint64_t frames = 0;
};

// Incremental mono reader. PCM16 is mapped by /32768, float32 passes through.
// WAVE_FORMAT_EXTENSIBLE headers are accepted.
class WavReader {
public:
    explicit WavReader(const std::filesystem::path& path);

    const WavInfo& info() const { return info_; }
    // Fills up to out.size() samples; returns the count, 0 at end of data.
    std::size_t read(std::span<float> out);

private:
    std::ifstream in_;
    WavInfo info_;
    std::uint64_t remaining_ = 0;
    std::vector<std::uint8_t> raw_;
};

// Incremental mono float32 writer; sizes are patched on close().
class WavWriter {
public:
    WavWriter(const std::filesystem::path& path, int rate);
    ~WavWriter();

    WavWriter(const WavWriter&) = delete;
    WavWriter& operator=(const WavWriter&) = delete;

    void write(std::span<const float> samples);
    void close();

private:
    std::ofstream out_;
    std::filesystem::path path_;
    std::uint64_t frames_ = 0;
    bool open_ = false;
    std::vector<std::uint8_t> raw_;
};

SampleBuffer wav_read(const std::filesystem::path& path);
void wav_write(const std::filesystem::path& path, const SampleBuffer& buf);

} // namespace bbwe::wav
