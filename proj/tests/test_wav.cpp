// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "bbwe/error.hpp"
#include "bbwe/wav.hpp"
#include "support/signals.hpp"

using namespace bbwe;
using namespace bbwe::wav;

namespace {

std::filesystem::path tmp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

void put16(std::string& s, std::uint16_t v) {
    s += static_cast<char>(v & 0xff);
    s += static_cast<char>(v >> 8);
}

void put32(std::string& s, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        s += static_cast<char>((v >> (8 * i)) & 0xff);
    }
}

// Minimal RIFF writer independent of the library.
std::string riff(std::uint16_t format, std::uint16_t channels, std::uint32_t rate, std::uint16_t bits,
                 const std::string& data, bool extensible = false) {
    std::string fmt;
    put16(fmt, extensible ? 0xfffe : format);
    put16(fmt, channels);
    put32(fmt, rate);
    put32(fmt, rate * channels * bits / 8);
    put16(fmt, static_cast<std::uint16_t>(channels * bits / 8));
    put16(fmt, bits);
    if (extensible) {
        put16(fmt, 22);
        put16(fmt, bits);
        put32(fmt, 4);
        put16(fmt, format);
        fmt += std::string("\x00\x00\x00\x00\x10\x00\x80\x00\x00\xaa\x00\x38\x9b\x71", 14);
    }
    std::string body = "WAVE";
    body += "fmt ";
    put32(body, static_cast<std::uint32_t>(fmt.size()));
    body += fmt;
    body += "LIST";
    put32(body, 4);
    body += "INFO";
    body += "data";
    put32(body, static_cast<std::uint32_t>(data.size()));
    body += data;
    std::string out = "RIFF";
    put32(out, static_cast<std::uint32_t>(body.size()));
    return out + body;
}

void write_file(const std::filesystem::path& p, const std::string& bytes) {
    std::ofstream(p, std::ios::binary).write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

} // namespace

TEST_SUITE("wav") {

TEST_CASE("float32 round trip is bitwise") {
    const auto p = tmp("bbwe_rt.wav");
    const SampleBuffer x(testing::noise(1234, 5), kRate48k);
    wav_write(p, x);
    const auto y = wav_read(p);
    CHECK(y.rate == kRate48k);
    CHECK(y.samples == x.samples);
    CHECK(std::filesystem::file_size(p) == 44 + 4 * 1234);
    std::filesystem::remove(p);
}

TEST_CASE("pcm16 mapping") {
    std::string data;
    for (std::int16_t v : {std::int16_t(-32768), std::int16_t(0), std::int16_t(16384), std::int16_t(32767)}) {
        put16(data, static_cast<std::uint16_t>(v));
    }
    for (bool ext : {false, true}) {
        const auto p = tmp("bbwe_pcm.wav");
        write_file(p, riff(1, 1, 16000, 16, data, ext));
        const auto y = wav_read(p);
        REQUIRE(y.size() == 4);
        CHECK(y.samples[0] == -1.0f);
        CHECK(y.samples[1] == 0.0f);
        CHECK(y.samples[2] == 0.5f);
        CHECK(y.samples[3] == 32767.0f / 32768.0f);
        std::filesystem::remove(p);
    }
}

TEST_CASE("rejections") {
    const auto p = tmp("bbwe_bad.wav");
    write_file(p, riff(1, 2, 16000, 16, std::string(8, '\0')));
    try {
        wav_read(p);
        FAIL("stereo accepted");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("channel count 2") != std::string::npos);
    }
    write_file(p, "RIFX1234WAVE");
    CHECK_THROWS_AS(wav_read(p), FormatError);
    write_file(p, riff(1, 1, 16000, 24, std::string(6, '\0')));
    CHECK_THROWS_AS(wav_read(p), FormatError);
    write_file(p, riff(3, 1, 16000, 32, "").substr(0, 30));
    CHECK_THROWS_AS(wav_read(p), FormatError);
    write_file(p, riff(3, 1, 44100, 32, std::string(8, '\0')));
    CHECK_THROWS_AS(wav_read(p), InvalidInput);
    CHECK_THROWS_AS(wav_read(tmp("does_not_exist.wav")), IoError);
    std::filesystem::remove(p);
}

TEST_CASE("streaming reader and writer") {
    const auto p = tmp("bbwe_stream.wav");
    const auto x = testing::noise(1000, 6);
    {
        WavWriter w(p, kRate16k);
        for (std::size_t i = 0; i < x.size(); i += 300) {
            w.write(std::span(x).subspan(i, std::min<std::size_t>(300, x.size() - i)));
        }
    }
    WavReader r(p);
    CHECK(r.info().frames == 1000);
    CHECK(r.info().rate == kRate16k);
    std::vector<float> y, block(77);
    while (const auto n = r.read(block)) {
        y.insert(y.end(), block.begin(), block.begin() + static_cast<std::ptrdiff_t>(n));
    }
    CHECK(y == x);
    std::filesystem::remove(p);
}

}  // TEST_SUITE
