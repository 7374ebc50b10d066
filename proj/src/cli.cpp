// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#include "bbwe/cli.hpp"

#include <CLI11.hpp>

#include <array>
#include <fstream>
#include <memory>
#include <ostream>
#include <vector>

#include "bbwe/error.hpp"
#include "bbwe/features.hpp"
#include "bbwe/model.hpp"
#include "bbwe/wav.hpp"

namespace bbwe::cli {

namespace {

void require_path(const std::filesystem::path& p, const char* flag, const std::string& mode) {
    if (p.empty()) {
        throw InvalidInput(std::string(flag) + " is required for mode " + mode);
    }
}

std::shared_ptr<const model::Model> load_model(const CliConfig& cfg, std::ostream& err) {
    auto m = model::Model::create(nn::read_weight_file(cfg.weights));
    for (const auto& w : m->warnings()) {
        err << "warning: " << w << "\n";
    }
    return m;
}

wav::WavReader open_input(const CliConfig& cfg) {
    wav::WavReader r(cfg.input);
    if (r.info().rate != kRate16k) {
        throw InvalidInput(cfg.input.string() + ": sample rate " + std::to_string(r.info().rate) +
                           ", expected 16000");
    }
    return r;
}

dsp::ResamplerMode resampler(const CliConfig& cfg) {
    return cfg.fir ? dsp::ResamplerMode::kFir : dsp::ResamplerMode::kIir;
}

// Reads chunk frames at a time and hands out whole frames, the last one
// zero-padded; valid is the count of real samples in it.
template <typename Fn>
void for_each_frame(wav::WavReader& r, std::size_t chunk, Fn&& fn) {
    std::vector<float> block(chunk * model::kFrameIn);
    std::vector<float> carry;
    carry.reserve(model::kFrameIn);
    std::size_t n;
    while ((n = r.read(block)) > 0) {
        std::size_t pos = 0;
        if (!carry.empty()) {
            const std::size_t take = std::min(model::kFrameIn - carry.size(), n);
            carry.insert(carry.end(), block.begin(), block.begin() + static_cast<std::ptrdiff_t>(take));
            pos = take;
            if (carry.size() == model::kFrameIn) {
                fn(std::span<const float>(carry), model::kFrameIn);
                carry.clear();
            }
        }
        for (; pos + model::kFrameIn <= n; pos += model::kFrameIn) {
            fn(std::span<const float>(block).subspan(pos, model::kFrameIn), model::kFrameIn);
        }
        carry.insert(carry.end(), block.begin() + static_cast<std::ptrdiff_t>(pos),
                     block.begin() + static_cast<std::ptrdiff_t>(n));
    }
    if (!carry.empty()) {
        const std::size_t valid = carry.size();
        carry.resize(model::kFrameIn, 0.0f);
        fn(std::span<const float>(carry), valid);
    }
}

void run_extend(const CliConfig& cfg, std::ostream& err) {
    require_path(cfg.input, "--in", cfg.mode);
    require_path(cfg.output, "--out", cfg.mode);
    require_path(cfg.weights, "--weights", cfg.mode);
    auto m = load_model(cfg, err);
    auto in = open_input(cfg);
    model::Stream stream(m, resampler(cfg));
    wav::WavWriter out(cfg.output, kRate48k);
    std::array<float, model::kFrameOut> y{};
    for_each_frame(in, cfg.chunk, [&](std::span<const float> frame, std::size_t valid) {
        stream.extend_frame(frame, y);
        out.write(std::span<const float>(y).first(3 * valid));
    });
    out.close();
}

void run_decompose(const CliConfig& cfg, std::ostream& err) {
    require_path(cfg.input, "--in", cfg.mode);
    require_path(cfg.output, "--out", cfg.mode);
    require_path(cfg.weights, "--weights", cfg.mode);
    auto m = load_model(cfg, err);
    auto in = open_input(cfg);
    model::Stream stream(m, resampler(cfg));
    static constexpr std::array<const char*, model::kLanes> kTags = {"bypass", "adashape", "nonlin"};
    std::vector<std::unique_ptr<wav::WavWriter>> outs;
    for (const char* tag : kTags) {
        outs.push_back(std::make_unique<wav::WavWriter>(suffixed(cfg.output, tag), kRate48k));
    }
    std::array<float, model::kFrameOut> y{};
    model::FrameTaps taps;
    for_each_frame(in, cfg.chunk, [&](std::span<const float> frame, std::size_t valid) {
        stream.extend_frame(frame, y, &taps);
        for (std::size_t c = 0; c < model::kLanes; ++c) {
            outs[c]->write(std::span<const float>(taps.y48[c]).first(3 * valid));
        }
    });
    for (auto& o : outs) {
        o->close();
    }
}

void run_features(const CliConfig& cfg) {
    require_path(cfg.input, "--in", cfg.mode);
    require_path(cfg.output, "--out", cfg.mode);
    auto in = open_input(cfg);
    std::ofstream out(cfg.output, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot create " + cfg.output.string());
    }
    features::FeatureExtractor fx;
    for_each_frame(in, cfg.chunk, [&](std::span<const float> frame, std::size_t valid) {
        if (valid == features::kFrameSize) {
            const auto f = fx.push(frame);
            features::write_feature_dump(out, std::span(&f, 1));
        }
    });
}

void run_report(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    require_path(cfg.weights, "--weights", cfg.mode);
    auto m = load_model(cfg, err);
    const auto r = model::report(*m, resampler(cfg));
    out << "params=" << r.params << "\n";
    out << "mflops=" << r.mflops << "\n";
    out << "mmacs=" << r.mmacs << "\n";
    out << "delay48=" << r.delay48 << "\n";
}

} // namespace

std::filesystem::path suffixed(const std::filesystem::path& path, const std::string& tag) {
    auto p = path;
    const auto ext = path.extension();
    p.replace_extension();
    p += "." + tag;
    p += ext.empty() ? std::filesystem::path(".wav") : ext;
    return p;
}

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.chunk == 0) {
            throw InvalidInput("--chunk must be at least 1");
        }
        if (config.mode == "extend") {
            run_extend(config, err);
        } else if (config.mode == "decompose") {
            run_decompose(config, err);
        } else if (config.mode == "features") {
            run_features(config);
        } else if (config.mode == "report") {
            run_report(config, out, err);
        } else {
            throw InvalidInput("unknown mode '" + config.mode + "'");
        }
    } catch (const Error& e) {
        err << "error: " << e.contract() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Speech bandwidth extension, 16 kHz to 48 kHz"};
    CliConfig cfg;
    app.add_option("--in", cfg.input, "Input WAV (mono, 16 kHz, PCM16 or float32)");
    app.add_option("--out", cfg.output, "Output WAV or feature dump");
    app.add_option("--weights", cfg.weights, "Weight file");
    app.add_option("--mode", cfg.mode, "Operation")
        ->check(CLI::IsMember({"extend", "decompose", "report", "features"}));
    app.add_option("--chunk", cfg.chunk, "Frames of 10 ms per read")->check(CLI::PositiveNumber);
    app.add_flag("--fir", cfg.fir, "Use the FIR approximation of the 2x upsampler");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: usage: " << e.what() << "\n";
        return 2;
    }
    return run(cfg, out, err);
}

} // namespace bbwe::cli
