// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bbwe/complexity.hpp"
#include "bbwe/dsp.hpp"
#include "bbwe/error.hpp"
#include "bbwe/features.hpp"
#include "bbwe/fixtures.hpp"
#include "bbwe/graph.hpp"
#include "bbwe/model.hpp"
#include "bbwe/weights.hpp"
#include "support/kernel_suite.hpp"
#include "support/signals.hpp"

using namespace bbwe;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::size_t kParamMin = 296000;
constexpr std::size_t kParamMax = 444000;
constexpr double kMflopsMin = 110.0;
constexpr double kMflopsMax = 170.0;
constexpr int kDelay48 = 13;
constexpr double kMaxRtf = 0.05;
constexpr double kThroughputClip = 10.0;
constexpr double kStreamClip = 5.0;
constexpr double kStreamTol = 1e-6;
constexpr double kDecompositionTol = 1e-6;
constexpr int kKernelInstances = 100;
constexpr double kKernelTol = 1e-6;
constexpr int kNonlinPoints = 10000;
constexpr std::int64_t kNonlinUlp = 4;
constexpr double kIfTol = 1e-3;
constexpr double kGainShiftTol = 1e-5;

struct Outcome {
    bool ok;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::int64_t ulp_distance(float a, float b) {
    auto ordered = [](float v) {
        const auto i = static_cast<std::int64_t>(std::bit_cast<std::int32_t>(v));
        return i < 0 ? -(i & 0x7fffffff) : i;
    };
    return std::llabs(ordered(a) - ordered(b));
}

std::shared_ptr<const model::Model> random_model() { return model::Model::create(model::random_weights({}, 1)); }

Outcome check_params() {
    const auto t0 = Clock::now();
    const auto bytes = nn::serialize_weights(model::identity_weights());
    const auto m = model::Model::create(nn::parse_weights(bytes));
    const double load_ms = 1e3 * seconds_since(t0);
    bool rejects = false;
    try {
        model::Model::create(model::identity_weights({.latent_dim = 128, .conv_width = 64, .shape_hidden = 64}));
    } catch (const ValidationError&) {
        rejects = true;
    }
    const auto p = m->params();
    return {p >= kParamMin && p <= kParamMax && rejects,
            fmt("params=%zu in [%zu, %zu], load %.1f ms, out-of-budget file rejected at load: %s", p, kParamMin,
                kParamMax, load_ms, rejects ? "yes" : "no")};
}

Outcome check_complexity() {
    const auto t0 = Clock::now();
    const auto graph = model::cost_graph({});
    const double mflops = nn::count_flops(graph);
    const auto s = nn::summarize(graph);
    const double dt = seconds_since(t0);
    const bool ok = mflops >= kMflopsMin && mflops <= kMflopsMax && s.mmacs == mflops / 2.0 && dt < 1.0;
    return {ok, fmt("mflops=%.2f in [%.0f, %.0f], mmacs=%.3f, %.3f s", mflops, kMflopsMin, kMflopsMax, s.mmacs, dt)};
}

Outcome check_delay() {
    const auto t0 = Clock::now();
    const auto m = model::Model::create(model::identity_weights());
    bool ok = true;
    std::string worst;
    for (auto mode : {dsp::ResamplerMode::kIir, dsp::ResamplerMode::kFir}) {
        for (std::size_t idx : {0u, 1u, 7u, 159u, 160u, 401u, 777u}) {
            SampleBuffer x(std::vector<float>(960, 0.0f), kRate16k);
            x.samples[idx] = 1.0f;
            const auto y = model::extend_offline(m, x, mode);
            const auto peak = static_cast<std::size_t>(
                std::max_element(y.samples.begin(), y.samples.end(),
                                 [](float a, float b) { return std::fabs(a) < std::fabs(b); }) -
                y.samples.begin());
            if (peak != 3 * idx + kDelay48) {
                ok = false;
                worst = fmt(", impulse at %zu peaked at %zu", idx, peak);
            }
        }
    }
    const double dt = seconds_since(t0);
    return {ok && dt < 1.0, fmt("peak at 3m+%d for 7 offsets in both resampler modes, %.3f s%s", kDelay48, dt,
                                worst.c_str())};
}

Outcome check_throughput() {
    const auto m = random_model();
    const SampleBuffer x(testing::speech_like(kThroughputClip, 11), kRate16k);
    const auto t0 = Clock::now();
    const auto y = model::extend_offline(m, x);
    const double dt = seconds_since(t0);
    const double rtf = dt / kThroughputClip;
    return {rtf < kMaxRtf && dt < 10.0 && y.size() == 3 * x.size(),
            fmt("RTF=%.4f (< %.2f) on a %.0f s clip, %.3f s", rtf, kMaxRtf, kThroughputClip, dt)};
}

Outcome check_streaming() {
    const auto m = random_model();
    const SampleBuffer x(testing::speech_like(kStreamClip, 12), kRate16k);
    const auto ref = model::extend_offline(m, x);
    model::Stream stream(m);
    std::mt19937 rng(3);
    std::uniform_int_distribution<std::size_t> chunk(1, 1000);
    std::vector<float> y;
    for (std::size_t i = 0; i < x.size();) {
        const std::size_t n = std::min(chunk(rng), x.size() - i);
        const auto out = stream.push(std::span(x.samples).subspan(i, n));
        y.insert(y.end(), out.begin(), out.end());
        i += n;
    }
    const bool sized = y.size() == ref.size();
    const double err = sized ? testing::max_abs_diff(y, ref.samples) : INFINITY;
    return {sized && err <= kStreamTol,
            fmt("max |chunked - one-shot| = %.3g (<= %.0e), random chunks 1..1000", err, kStreamTol)};
}

Outcome check_zero() {
    const auto m = random_model();
    const SampleBuffer x(std::vector<float>(2 * kRate16k, 0.0f), kRate16k);
    std::size_t nonzero = 0;
    for (auto mode : {dsp::ResamplerMode::kIir, dsp::ResamplerMode::kFir}) {
        for (float v : model::extend_offline(m, x, mode).samples) {
            nonzero += v != 0.0f;
        }
    }
    model::Stream stream(m);
    for (std::size_t i = 0; i < x.size(); i += 37) {
        for (float v : stream.push(std::span(x.samples).subspan(i, std::min<std::size_t>(37, x.size() - i)))) {
            nonzero += v != 0.0f;
        }
    }
    return {nonzero == 0, fmt("%zu nonzero output samples for 2 s of silence (offline and chunked)", nonzero)};
}

Outcome check_decomposition() {
    const auto m = random_model();
    const SampleBuffer x(testing::speech_like(2.0, 13), kRate16k);
    const auto d = model::decompose(m, x);
    const auto ref = model::extend_offline(m, x);
    double err = 0.0;
    bool sized = d.y48.size() == ref.size() && d.bypass.size() == ref.size();
    for (std::size_t n = 0; sized && n < ref.size(); ++n) {
        const double sum = static_cast<double>(d.bypass.samples[n]) + d.adashape.samples[n] + d.nonlin.samples[n];
        err = std::max(err, std::fabs(sum - d.y48.samples[n]));
        err = std::max(err, std::fabs(static_cast<double>(d.y48.samples[n]) - ref.samples[n]));
    }
    return {sized && err <= kDecompositionTol,
            fmt("max |bypass + adashape + nonlin - y48| = %.3g (<= %.0e)", err, kDecompositionTol)};
}

Outcome check_kernels() {
    const auto results = testing::run_kernel_suite(kKernelInstances, 2026);
    bool ok = true;
    std::string detail;
    for (const auto& r : results) {
        ok = ok && r.instances >= kKernelInstances && r.max_err <= kKernelTol;
        detail += fmt("%s%s %d/%.2g", detail.empty() ? "" : ", ", r.name.c_str(), r.instances, r.max_err);
    }
    return {ok, detail + fmt(" (instances/max err, <= %.0e)", kKernelTol)};
}

Outcome check_nonlin() {
    const double scale = std::exp(2.0 * std::numbers::pi);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> expo(-20.0, 20.0);
    std::uniform_int_distribution<int> sign(0, 1);
    std::size_t odd = 0, bound = 0, scaling = 0;
    std::int64_t worst = 0;
    for (int i = 0; i < kNonlinPoints; ++i) {
        const auto x = static_cast<float>((sign(rng) ? -1.0 : 1.0) * std::exp2(expo(rng)));
        const float fx = dsp::nonlin_extend(x);
        odd += dsp::nonlin_extend(-x) != -fx;
        bound += std::fabs(fx) > std::fabs(x);
        // exact float argument X; the reference evaluates f at X / e^{2pi} in double
        const auto big = static_cast<float>(scale * x);
        const auto lhs = dsp::nonlin_extend(big);
        const auto rhs = static_cast<float>(scale * dsp::nonlin_extend(static_cast<double>(big) / scale));
        const auto d = ulp_distance(lhs, rhs);
        worst = std::max(worst, d);
        scaling += d > kNonlinUlp;
    }
    const bool one = dsp::nonlin_extend(1.0f) == 0.0f && dsp::nonlin_extend(-1.0f) == 0.0f;
    return {odd == 0 && bound == 0 && scaling == 0 && one,
            fmt("%d points: odd violations %zu, |f(x)|>|x| %zu, f(1)=0 %s, scaling max %lld ulp (<= %lld)",
                kNonlinPoints, odd, bound, one ? "yes" : "no", static_cast<long long>(worst),
                static_cast<long long>(kNonlinUlp))};
}

Outcome check_features() {
    using features::kFeatureDim;
    const auto x = testing::noise(16000, 21);
    const auto base = features::extract_features(x);
    double shift_err = 0.0;
    for (double g : {0.5, 2.0, 10.0}) {
        std::vector<float> xg(x.size());
        std::transform(x.begin(), x.end(), xg.begin(), [g](float v) { return static_cast<float>(g * v); });
        const auto fg = features::extract_features(xg);
        for (std::size_t f = 0; f < base.size(); ++f) {
            for (std::size_t b = 0; b < features::kErbBands; ++b) {
                const double want = base[f].erb()[b] + 2.0 * std::log10(g);
                shift_err = std::max(shift_err, std::fabs(fg[f].erb()[b] - want));
            }
        }
    }

    double if_err = 0.0;
    for (std::size_t k = 1; k < features::kIfBins; ++k) {
        const auto tone = testing::sine(50.0 * static_cast<double>(k), kRate16k, 160 * 8, 0.5, 0.3);
        const auto frames = features::extract_features(tone);
        // pi k per hop, wrapped to [-1, 1) after division by pi
        const double expected = (k % 2 == 0) ? 0.0 : -1.0;
        for (std::size_t f = 2; f < frames.size(); ++f) {
            const double d = std::fabs(frames[f].if_feat()[k] - expected);
            if_err = std::max(if_err, std::min(d, 2.0 - d));
        }
    }
    const bool dim = kFeatureDim == 72 && base.size() == 100 && sizeof(base[0].values) == 72 * sizeof(float);
    return {dim && shift_err <= kGainShiftTol && if_err <= kIfTol,
            fmt("dim=%zu, ERB gain-shift max err %.2g (<= %.0e), IF max err %.2g (<= %.0e) over bins 1..39",
                kFeatureDim, shift_err, kGainShiftTol, if_err, kIfTol)};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"parameter-budget", check_params},
        {"complexity-budget", check_complexity},
        {"delay", check_delay},
        {"throughput", check_throughput},
        {"streaming-offline", check_streaming},
        {"zero-in-zero-out", check_zero},
        {"decomposition", check_decomposition},
        {"kernel-oracles", check_kernels},
        {"nonlinearity", check_nonlin},
        {"features", check_features},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o{false, ""};
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.ok;
        std::printf("%s %s: %s\n", o.ok ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
