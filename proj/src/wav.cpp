// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#include "bbwe/wav.hpp"

#include <algorithm>
#include <array>
#include <cstring>

#include "bbwe/error.hpp"
#include "le_io.hpp"

namespace bbwe::wav {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xfffe;
constexpr std::uint32_t kMaxChunk = 0xffffffffu;

bool read_exact(std::ifstream& in, std::uint8_t* dst, std::size_t n) {
    in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
    return static_cast<std::size_t>(in.gcount()) == n;
}

} // namespace

WavReader::WavReader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
    if (!in_) {
        throw IoError("cannot open " + path.string());
    }
    std::array<std::uint8_t, 12> riff{};
    if (!read_exact(in_, riff.data(), riff.size()) || std::memcmp(riff.data(), "RIFF", 4) != 0 ||
        std::memcmp(riff.data() + 8, "WAVE", 4) != 0) {
        throw FormatError(path.string() + ": not a RIFF/WAVE file");
    }

    bool have_fmt = false;
    std::uint16_t format = 0;
    std::uint16_t bits = 0;
    for (;;) {
        std::array<std::uint8_t, 8> hdr{};
        if (!read_exact(in_, hdr.data(), hdr.size())) {
            throw FormatError(path.string() + ": no data chunk");
        }
        const std::uint32_t size = detail::load_u32(hdr.data() + 4);
        if (std::memcmp(hdr.data(), "fmt ", 4) == 0) {
            if (size < 16) {
                throw FormatError(path.string() + ": fmt chunk too short");
            }
            std::vector<std::uint8_t> fmt(size + (size & 1));
            if (!read_exact(in_, fmt.data(), fmt.size())) {
                throw FormatError(path.string() + ": truncated fmt chunk");
            }
            format = detail::load_u16(fmt.data());
            info_.channels = detail::load_u16(fmt.data() + 2);
            info_.rate = static_cast<int>(detail::load_u32(fmt.data() + 4));
            bits = detail::load_u16(fmt.data() + 14);
            if (format == kFormatExtensible) {
                if (size < 40) {
                    throw FormatError(path.string() + ": extensible fmt chunk too short");
                }
                format = detail::load_u16(fmt.data() + 24);
            }
            have_fmt = true;
        } else if (std::memcmp(hdr.data(), "data", 4) == 0) {
            if (!have_fmt) {
                throw FormatError(path.string() + ": data chunk before fmt chunk");
            }
            remaining_ = size == kMaxChunk ? UINT64_MAX : size;
            break;
        } else {
            in_.seekg(size + (size & 1), std::ios::cur);
            if (!in_) {
                throw FormatError(path.string() + ": truncated chunk");
            }
        }
    }

    if (info_.channels != 1) {
        throw InvalidInput(path.string() + ": channel count " + std::to_string(info_.channels) +
                           ", expected mono");
    }
    if (format == kFormatPcm && bits == 16) {
        info_.format = SampleFormat::kPcm16;
    } else if (format == kFormatFloat && bits == 32) {
        info_.format = SampleFormat::kFloat32;
    } else {
        throw FormatError(path.string() + ": unsupported sample format " + std::to_string(format) + " with " +
                          std::to_string(bits) + " bits");
    }
    const std::uint64_t width = info_.format == SampleFormat::kPcm16 ? 2 : 4;
    if (remaining_ != UINT64_MAX) {
        remaining_ -= remaining_ % width;
        info_.frames = remaining_ / width;
    }
}

std::size_t WavReader::read(std::span<float> out) {
    const std::size_t width = info_.format == SampleFormat::kPcm16 ? 2 : 4;
    std::size_t want = out.size() * width;
    if (remaining_ < want) {
        want = static_cast<std::size_t>(remaining_);
    }
    raw_.resize(want);
    in_.read(reinterpret_cast<char*>(raw_.data()), static_cast<std::streamsize>(want));
    const std::size_t got = static_cast<std::size_t>(in_.gcount()) / width;
    remaining_ = got * width < want ? 0 : remaining_ - want;
    for (std::size_t i = 0; i < got; ++i) {
        const std::uint8_t* p = raw_.data() + i * width;
        if (info_.format == SampleFormat::kPcm16) {
            out[i] = static_cast<float>(static_cast<std::int16_t>(detail::load_u16(p))) / 32768.0f;
        } else {
            out[i] = detail::load_f32(p);
        }
    }
    return got;
}

WavWriter::WavWriter(const std::filesystem::path& path, int rate)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
    if (!out_) {
        throw IoError("cannot create " + path.string());
    }
    std::vector<std::uint8_t> h;
    h.insert(h.end(), {'R', 'I', 'F', 'F'});
    detail::put_u32(h, 0);
    h.insert(h.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    detail::put_u32(h, 16);
    detail::put_u16(h, kFormatFloat);
    detail::put_u16(h, 1);
    detail::put_u32(h, static_cast<std::uint32_t>(rate));
    detail::put_u32(h, static_cast<std::uint32_t>(rate) * 4);
    detail::put_u16(h, 4);
    detail::put_u16(h, 32);
    h.insert(h.end(), {'d', 'a', 't', 'a'});
    detail::put_u32(h, 0);
    out_.write(reinterpret_cast<const char*>(h.data()), static_cast<std::streamsize>(h.size()));
    open_ = true;
}

WavWriter::~WavWriter() {
    try {
        close();
    } catch (...) {
    }
}

void WavWriter::write(std::span<const float> samples) {
    if (!open_) {
        throw StateError("write on closed WavWriter");
    }
    raw_.clear();
    for (float v : samples) {
        detail::put_f32(raw_, v);
    }
    out_.write(reinterpret_cast<const char*>(raw_.data()), static_cast<std::streamsize>(raw_.size()));
    if (!out_) {
        throw IoError("failed writing " + path_.string());
    }
    frames_ += samples.size();
}

void WavWriter::close() {
    if (!open_) {
        return;
    }
    open_ = false;
    const std::uint64_t data = frames_ * 4;
    const auto data32 = static_cast<std::uint32_t>(std::min<std::uint64_t>(data, kMaxChunk - 36));
    std::vector<std::uint8_t> v;
    detail::put_u32(v, data32 + 36);
    out_.seekp(4);
    out_.write(reinterpret_cast<const char*>(v.data()), 4);
    v.clear();
    detail::put_u32(v, data32);
    out_.seekp(40);
    out_.write(reinterpret_cast<const char*>(v.data()), 4);
    out_.close();
    if (!out_) {
        throw IoError("failed finalizing " + path_.string());
    }
}

SampleBuffer wav_read(const std::filesystem::path& path) {
    WavReader r(path);
    if (!is_supported_rate(r.info().rate)) {
        throw InvalidInput(path.string() + ": unsupported sample rate " + std::to_string(r.info().rate));
    }
    std::vector<float> samples;
    std::vector<float> block(4096);
    while (const std::size_t n = r.read(block)) {
        samples.insert(samples.end(), block.begin(), block.begin() + static_cast<std::ptrdiff_t>(n));
    }
    return SampleBuffer(std::move(samples), r.info().rate);
}

void wav_write(const std::filesystem::path& path, const SampleBuffer& buf) {
    WavWriter w(path, buf.rate);
    w.write(buf.samples);
    w.close();
}

} // namespace bbwe::wav
