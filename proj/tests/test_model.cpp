// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bbwe/error.hpp"
#include "bbwe/fixtures.hpp"
#include "bbwe/model.hpp"
#include "support/signals.hpp"

using namespace bbwe;
using namespace bbwe::model;
using namespace bbwe::testing;

namespace {

std::shared_ptr<const Model> identity_model() {
    static const auto m = Model::create(identity_weights());
    return m;
}

std::shared_ptr<const Model> random_model(std::uint32_t seed = 1) { return Model::create(random_weights({}, seed)); }

std::size_t peak_index(const std::vector<float>& y) {
    std::size_t p = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (std::fabs(y[i]) > std::fabs(y[p])) {
            p = i;
        }
    }
    return p;
}

// Sum of random-phase sinusoids confined to [lo, hi] Hz, sampled at 48 kHz.
std::vector<double> bandlimited48(std::size_t n48, double lo, double hi, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> f(lo, hi), ph(0.0, 2.0 * std::numbers::pi);
    std::vector<std::pair<double, double>> parts(40);
    for (auto& p : parts) {
        p = {f(rng), ph(rng)};
    }
    std::vector<double> x(n48, 0.0);
    for (std::size_t n = 0; n < n48; ++n) {
        for (const auto& [fr, p] : parts) {
            x[n] += 0.02 * std::sin(2.0 * std::numbers::pi * fr * static_cast<double>(n) / 48000.0 + p);
        }
    }
    return x;
}

} // namespace

TEST_SUITE("model") {

TEST_CASE("unloaded stream and bad frames") {
    Stream s;
    std::vector<float> out(480);
    CHECK_FALSE(s.loaded());
    CHECK_THROWS_AS(s.extend_frame(std::vector<float>(160), out), StateError);
    CHECK_THROWS_AS(s.push(std::vector<float>(160)), StateError);
    Stream ok(identity_model());
    CHECK_THROWS_AS(ok.extend_frame(std::vector<float>(159), out), InvalidInput);
    CHECK_THROWS_AS(Stream(nullptr), StateError);
}

TEST_CASE("160 in, 480 out; silence in, silence out") {
    for (const auto& m : {identity_model(), random_model(2)}) {
        Stream s(m);
        std::vector<float> out(480, 1.0f);
        for (int f = 0; f < 20; ++f) {
            s.extend_frame(std::vector<float>(160, 0.0f), out);
            for (float v : out) {
                REQUIRE(v == 0.0f);
            }
        }
    }
}

TEST_CASE("identity weights: impulse lands at 3m+13") {
    for (auto mode : {dsp::ResamplerMode::kIir, dsp::ResamplerMode::kFir}) {
        for (std::size_t m : {0u, 5u, 79u, 80u, 159u, 160u, 333u}) {
            SampleBuffer x(std::vector<float>(640, 0.0f), kRate16k);
            x.samples[m] = 1.0f;
            const auto y = extend_offline(identity_model(), x, mode);
            CHECK(peak_index(y.samples) == 3 * m + 13);
        }
    }
}

TEST_CASE("identity weights reproduce the plain resampler cascade") {
    const auto x = speech_like(0.5, 4);
    const auto y = extend_offline(identity_model(), SampleBuffer(x, kRate16k));
    dsp::Upsampler2x up2;
    dsp::Upsampler15x up15;
    std::vector<float> y32(2 * x.size()), y48(3 * x.size());
    up2.process(x, y32);
    up15.process(y32, y48);
    CHECK(y.samples == y48);
}

TEST_CASE("identity weights: cross-correlation lag is 13") {
    const std::size_t n16 = 3200;
    const auto ref = bandlimited48(3 * n16, 200.0, 7000.0, 9);
    std::vector<float> x(n16);
    for (std::size_t m = 0; m < n16; ++m) {
        x[m] = static_cast<float>(ref[3 * m]);
    }
    const auto y = extend_offline(identity_model(), SampleBuffer(x, kRate16k)).samples;
    long best_lag = 0;
    double best = -1.0;
    for (long lag = 0; lag < 40; ++lag) {
        double acc = 0.0;
        for (std::size_t n = 600; n + 40 < y.size(); ++n) {
            acc += y[n] * ref[n - static_cast<std::size_t>(lag)];
        }
        if (acc > best) {
            best = acc;
            best_lag = lag;
        }
    }
    CHECK(best_lag == 13);
}

TEST_CASE("identity weights keep the 0-7 kHz magnitude within 2 dB") {
    for (double hz = 250.0; hz <= 7000.0; hz += 250.0) {
        const auto x = sine(hz, kRate16k, 4800, 0.5);
        const auto y = extend_offline(identity_model(), SampleBuffer(x, kRate16k)).samples;
        // least-squares fit of a sin/cos pair at hz over the settled part
        double ss = 0.0, cc = 0.0, sc = 0.0, ys = 0.0, yc = 0.0;
        for (std::size_t n = 2400; n < y.size(); ++n) {
            const double a = 2.0 * std::numbers::pi * hz * static_cast<double>(n) / kRate48k;
            const double s = std::sin(a), c = std::cos(a);
            ss += s * s;
            cc += c * c;
            sc += s * c;
            ys += y[n] * s;
            yc += y[n] * c;
        }
        const double det = ss * cc - sc * sc;
        const double bs = (ys * cc - yc * sc) / det;
        const double bc = (yc * ss - ys * sc) / det;
        const double gain_db = 20.0 * std::log10(std::hypot(bs, bc) / 0.5);
        CAPTURE(hz);
        CHECK(std::fabs(gain_db) <= 2.0);
    }
}

TEST_CASE("zero encoder weights give zero latents") {
    auto m = identity_model();
    Encoder enc(m);
    std::vector<float> lat(2 * m->config().latent_dim, 1.0f);
    const auto frames = features::extract_features(speech_like(0.1, 2));
    for (const auto& f : frames) {
        enc.push(f, lat);
        for (float v : lat) {
            REQUIRE(v == 0.0f);
        }
    }
}

TEST_CASE("streaming encoder matches batch encoder") {
    auto m = random_model(5);
    const auto frames = features::extract_features(speech_like(0.5, 6));
    const auto batch = encode_features(*m, frames);
    const std::size_t L = m->config().latent_dim;
    REQUIRE(batch.size() == 2 * frames.size() * L);
    Encoder enc(m);
    std::vector<float> lat(2 * L);
    double d = 0.0;
    for (std::size_t f = 0; f < frames.size(); ++f) {
        enc.push(frames[f], lat);
        for (std::size_t i = 0; i < 2 * L; ++i) {
            d = std::max(d, std::fabs(static_cast<double>(lat[i]) - batch[2 * f * L + i]));
            REQUIRE(std::fabs(lat[i]) <= 1.0f);
        }
    }
    CHECK(d <= 1e-5);
    enc.reset();
    for (float v : enc.state().h) {
        CHECK(v == 0.0f);
    }
}

TEST_CASE("offline lengths and padding") {
    auto m = random_model();
    CHECK(extend_offline(m, SampleBuffer({}, kRate16k)).empty());
    for (std::size_t n : {1u, 159u, 160u, 161u, 1000u}) {
        const auto y = extend_offline(m, SampleBuffer(noise(n, 3), kRate16k));
        CHECK(y.size() == 3 * n);
        CHECK(y.rate == kRate48k);
    }
    CHECK_THROWS_AS(extend_offline(m, SampleBuffer(std::vector<float>(10), kRate48k)), InvalidInput);
}

TEST_CASE("chunked streaming equals one-shot") {
    auto m = random_model(7);
    const auto x = speech_like(1.0, 7);
    const auto ref = extend_offline(m, SampleBuffer(x, kRate16k)).samples;
    for (std::size_t chunk : {1u, 37u, 160u, 480u, 1601u}) {
        Stream s(m);
        std::vector<float> y;
        for (std::size_t p = 0; p < x.size(); p += chunk) {
            const auto part = s.push(std::span(x).subspan(p, std::min(chunk, x.size() - p)));
            y.insert(y.end(), part.begin(), part.end());
        }
        CHECK(s.pending() == x.size() % 160);
        REQUIRE(y.size() == ref.size());
        CHECK(max_abs_diff(y, ref) <= 1e-6);
    }
}

TEST_CASE("reset behaves like a fresh stream") {
    auto m = random_model(8);
    const auto x = speech_like(0.3, 1);
    Stream s(m);
    const auto a = s.push(x);
    s.reset();
    s.reset();
    for (float v : s.encoder().state().h) {
        REQUIRE(v == 0.0f);
    }
    CHECK(s.pending() == 0);
    const auto b = s.push(x);
    Stream fresh(m);
    CHECK(a == b);
    CHECK(a == fresh.push(x));
}

TEST_CASE("fir mode stays close to iir mode") {
    auto m = identity_model();
    const SampleBuffer x(speech_like(0.5, 3), kRate16k);
    const auto a = extend_offline(m, x, dsp::ResamplerMode::kIir);
    const auto b = extend_offline(m, x, dsp::ResamplerMode::kFir);
    CHECK(max_abs_diff(a.samples, b.samples) <= 1e-3);
}

TEST_CASE("decomposition sums to the output") {
    auto m = random_model(9);
    const SampleBuffer x(speech_like(1.0, 9), kRate16k);
    const auto d = decompose(m, x);
    const auto y = extend_offline(m, x);
    CHECK(d.y48.samples == y.samples);
    REQUIRE(d.bypass.size() == y.size());
    double e48 = 0.0, e32 = 0.0;
    for (std::size_t n = 0; n < y.size(); ++n) {
        const double s = static_cast<double>(d.bypass.samples[n]) + d.adashape.samples[n] + d.nonlin.samples[n];
        e48 = std::max(e48, std::fabs(s - y.samples[n]));
    }
    for (std::size_t n = 0; n < d.y32.size(); ++n) {
        const double s =
            static_cast<double>(d.y32_bypass.samples[n]) + d.y32_adashape.samples[n] + d.y32_nonlin.samples[n];
        e32 = std::max(e32, std::fabs(s - d.y32.samples[n]));
    }
    CHECK(e48 <= 1e-6);
    CHECK(e32 <= 1e-6);

    const auto z = decompose(m, SampleBuffer(std::vector<float>(800, 0.0f), kRate16k));
    for (const auto* part : {&z.bypass, &z.adashape, &z.nonlin}) {
        for (float v : part->samples) {
            REQUIRE(v == 0.0f);
        }
    }
}

TEST_CASE("graph rebuilt from parts; masked reruns of the final mixer match the contributions") {
    auto m = random_model(10);
    const auto x = speech_like(0.2, 10);
    const std::size_t frames = x.size() / 160;
    const std::size_t L = m->config().latent_dim;

    features::FeatureExtractor fx;
    Encoder enc(m);
    std::array<nn::AdaConvState, 3> st = {nn::AdaConvState(stages()[0]), nn::AdaConvState(stages()[1]),
                                          nn::AdaConvState(stages()[2])};
    std::array<nn::AdaConvState, 3> masked = {st[2], st[2], st[2]};
    std::array<dsp::Upsampler2x, 3> up2;
    std::array<dsp::Upsampler15x, 3> up15;
    std::vector<float> lat(2 * L), scratch(1024);
    std::vector<float> y, parts[3];

    for (std::size_t f = 0; f < frames; ++f) {
        auto frame = std::span(x).subspan(f * 160, 160);
        enc.push(fx.push(frame), lat);
        for (std::size_t s = 0; s < 2; ++s) {
            auto phi = std::span<const float>(lat).subspan(s * L, L);
            std::vector<float> a(240), b(480), c(480), d(720), out(240);
            m->adaconv(0).process(st[0], frame.subspan(80 * s, 80), phi, a);
            for (std::size_t ch = 0; ch < 3; ++ch) {
                up2[ch].process(std::span(a).subspan(80 * ch, 80), std::span(b).subspan(160 * ch, 160));
            }
            m->adashape(0).process(std::span(b).subspan(160, 160), phi, std::span(b).subspan(160, 160), scratch);
            dsp::nonlin_extend(std::span(b).subspan(320, 160), std::span(b).subspan(320, 160));
            m->adaconv(1).process(st[1], b, phi, c);
            for (std::size_t ch = 0; ch < 3; ++ch) {
                up15[ch].process(std::span(c).subspan(160 * ch, 160), std::span(d).subspan(240 * ch, 240));
            }
            m->adashape(1).process(std::span(d).subspan(240, 240), phi, std::span(d).subspan(240, 240), scratch);
            dsp::nonlin_extend(std::span(d).subspan(480, 240), std::span(d).subspan(480, 240));
            m->adaconv(2).process(st[2], d, phi, out);
            y.insert(y.end(), out.begin(), out.end());
            for (std::size_t keep = 0; keep < 3; ++keep) {
                std::vector<float> dm(720, 0.0f);
                std::copy_n(d.begin() + 240 * keep, 240, dm.begin() + 240 * keep);
                m->adaconv(2).process(masked[keep], dm, phi, out);
                parts[keep].insert(parts[keep].end(), out.begin(), out.end());
            }
        }
    }
    const auto dec = decompose(m, SampleBuffer(x, kRate16k));
    CHECK(y == dec.y48.samples);
    CHECK(parts[0] == dec.bypass.samples);
    CHECK(parts[1] == dec.adashape.samples);
    CHECK(parts[2] == dec.nonlin.samples);
}

TEST_CASE("report") {
    const auto r = report(*identity_model());
    CHECK(r.params == expected_params({}));
    CHECK(r.delay48 == 13);
    CHECK(r.mmacs == doctest::Approx(r.mflops / 2.0));
}

TEST_CASE("deterministic across streams") {
    auto m = random_model(11);
    const auto x = speech_like(0.4, 2);
    Stream a(m), b(m);
    CHECK(a.push(x) == b.push(x));
}

}  // TEST_SUITE
