// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#include "bbwe/model.hpp"

#include <algorithm>
#include <cmath>

#include "bbwe/error.hpp"

namespace bbwe::model {

namespace {

std::shared_ptr<const Model> require_model(std::shared_ptr<const Model> model, const char* what) {
    if (!model) {
        throw StateError(std::string(what) + " created without a model");
    }
    return model;
}

// w[o][c][j] -> row o of [o][j * C_in + c], matching inputs stacked oldest tap first.
nn::Dense stacked_conv(const nn::Tensor& w, const nn::Tensor& b) {
    const std::size_t cout = w.dim(0);
    const std::size_t cin = w.dim(1);
    const std::size_t k = w.dim(2);
    std::vector<float> m(cout * cin * k);
    for (std::size_t o = 0; o < cout; ++o) {
        for (std::size_t c = 0; c < cin; ++c) {
            for (std::size_t j = 0; j < k; ++j) {
                m[o * cin * k + j * cin + c] = w(o, c, j);
            }
        }
    }
    return nn::Dense(cout, cin * k, m, b.data());
}

nn::Dense tconv_tap(const nn::Tensor& w, const nn::Tensor& b, std::size_t j) {
    const std::size_t cin = w.dim(0);
    const std::size_t cout = w.dim(1);
    std::vector<float> m(cout * cin);
    for (std::size_t o = 0; o < cout; ++o) {
        for (std::size_t c = 0; c < cin; ++c) {
            m[o * cin + c] = w(c, o, j);
        }
    }
    return nn::Dense(cout, cin, m, b.data());
}

void tanh_inplace(std::span<float> v) {
    for (float& x : v) {
        x = std::tanh(x);
    }
}

} // namespace

std::shared_ptr<const Model> Model::create(nn::ModelWeights weights) {
    const auto& conv1 = weights.at("enc.conv1.weight");
    if (conv1.rank() != 3) {
        throw ValidationError("tensor 'enc.conv1.weight' has shape " + conv1.shape_string() + ", expected rank 3");
    }
    ModelConfig cfg;
    cfg.latent_dim = weights.latent_dim;
    cfg.conv_width = conv1.dim(0);
    if (cfg.latent_dim == 0) {
        throw ValidationError("latent_dim must be positive");
    }
    nn::validate_weights(weights, shape_table(cfg));

    const std::size_t params = nn::count_params(weights);
    if (params < kParamMin || params > kParamMax) {
        throw ValidationError("parameter count " + std::to_string(params) + " outside budget [" +
                              std::to_string(kParamMin) + ", " + std::to_string(kParamMax) + "]");
    }
    const double mflops = nn::count_flops(cost_graph(cfg));
    if (mflops < kMflopsMin || mflops > kMflopsMax) {
        throw ValidationError("complexity " + std::to_string(mflops) + " MFLOPS outside budget [110, 170]");
    }

    std::shared_ptr<Model> m(new Model());
    m->config_ = cfg;
    m->params_ = params;
    m->mflops_ = mflops;
    m->warnings_ = weights.warnings;

    const auto& w = weights;
    m->conv1_ = stacked_conv(w.at("enc.conv1.weight"), w.at("enc.conv1.bias"));
    m->conv2_ = stacked_conv(w.at("enc.conv2.weight"), w.at("enc.conv2.bias"));
    for (std::size_t j = 0; j < 2; ++j) {
        m->tconv_[j] = tconv_tap(w.at("enc.tconv.weight"), w.at("enc.tconv.bias"), j);
    }
    m->gru_ = nn::Gru(nn::GruWeights{w.at("enc.gru.weight_ih"), w.at("enc.gru.weight_hh"), w.at("enc.gru.bias_ih"),
                                     w.at("enc.gru.bias_hh")});
    for (std::size_t s = 0; s < kStages; ++s) {
        const auto p = adaconv_prefix(s);
        m->adaconv_[s] = nn::AdaConv(stages()[s], nn::AdaConvWeights{w.at(p + ".kernel.weight"),
                                                                      w.at(p + ".kernel.bias"),
                                                                      w.at(p + ".gain.weight"), w.at(p + ".gain.bias")});
    }
    for (std::size_t i = 0; i < m->adashape_.size(); ++i) {
        const auto p = adashape_prefix(i);
        m->adashape_[i] = nn::AdaShape(nn::AdaShapeWeights{w.at(p + ".hidden.weight"), w.at(p + ".hidden.bias"),
                                                           w.at(p + ".out.weight"), w.at(p + ".out.bias")});
    }
    m->weights_ = std::move(weights);
    return m;
}

// ---------------------------------------------------------------------------
// encoder

Encoder::Encoder(std::shared_ptr<const Model> model) : model_(require_model(std::move(model), "encoder")) {
    const auto& cfg = model_->config();
    const std::size_t F = features::kFeatureDim;
    conv_in_.resize(3 * std::max(F, cfg.conv_width));
    a1_.resize(cfg.conv_width);
    a2_.resize(cfg.conv_width);
    up_.resize(cfg.latent_dim);
    scratch_.resize(model_->gru().scratch_size());
    reset();
}

void Encoder::reset() {
    if (!model_) {
        return;
    }
    const auto& cfg = model_->config();
    state_.features.assign(2 * features::kFeatureDim, 0.0f);
    state_.hidden1.assign(2 * cfg.conv_width, 0.0f);
    state_.h.assign(cfg.latent_dim, 0.0f);
}

void Encoder::push(const features::FeatureFrame& frame, std::span<float> latents) {
    if (!model_) {
        throw StateError("encoder has no model");
    }
    const std::size_t F = features::kFeatureDim;
    const std::size_t C = model_->config().conv_width;
    const std::size_t L = model_->config().latent_dim;
    if (latents.size() != 2 * L) {
        throw InvalidInput("encoder: latent buffer must hold 2 x " + std::to_string(L));
    }

    auto in1 = std::span(conv_in_).first(3 * F);
    std::copy(state_.features.begin(), state_.features.end(), in1.begin());
    std::copy(frame.values.begin(), frame.values.end(), in1.begin() + 2 * F);
    model_->conv1().apply(in1, a1_);
    tanh_inplace(a1_);
    std::copy(in1.begin() + F, in1.end(), state_.features.begin());

    auto in2 = std::span(conv_in_).first(3 * C);
    std::copy(state_.hidden1.begin(), state_.hidden1.end(), in2.begin());
    std::copy(a1_.begin(), a1_.end(), in2.begin() + 2 * C);
    model_->conv2().apply(in2, a2_);
    tanh_inplace(a2_);
    std::copy(in2.begin() + C, in2.end(), state_.hidden1.begin());

    for (std::size_t j = 0; j < 2; ++j) {
        model_->tconv(j).apply(a2_, up_);
        tanh_inplace(up_);
        model_->gru().step(up_, state_.h, scratch_);
        std::copy(state_.h.begin(), state_.h.end(), latents.begin() + j * L);
    }
}

std::vector<float> encode_features(const Model& model, std::span<const features::FeatureFrame> frames) {
    const std::size_t F = features::kFeatureDim;
    const std::size_t L = model.config().latent_dim;
    const std::size_t n = frames.size();
    if (n == 0) {
        return {};
    }
    nn::Tensor x({F, n});
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t d = 0; d < F; ++d) {
            x(d, t) = frames[t].values[d];
        }
    }
    const auto& w = model.weights();
    auto activate = [](nn::Tensor t) {
        tanh_inplace(t.data());
        return t;
    };
    auto h1 = activate(nn::conv1d(x, w.at("enc.conv1.weight"), w.at("enc.conv1.bias").data()));
    auto h2 = activate(nn::conv1d(h1, w.at("enc.conv2.weight"), w.at("enc.conv2.bias").data()));
    auto up = activate(nn::tconv1d(h2, w.at("enc.tconv.weight"), w.at("enc.tconv.bias").data()));

    std::vector<float> out(2 * n * L);
    std::vector<float> h(L, 0.0f);
    std::vector<float> step_in(L);
    for (std::size_t t = 0; t < 2 * n; ++t) {
        for (std::size_t d = 0; d < L; ++d) {
            step_in[d] = up(d, t);
        }
        nn::gru_step(model.gru(), step_in, h);
        std::copy(h.begin(), h.end(), out.begin() + t * L);
    }
    return out;
}

// ---------------------------------------------------------------------------
// stream

Stream::Stream(std::shared_ptr<const Model> model, dsp::ResamplerMode mode, std::size_t fir_length)
    : model_(require_model(std::move(model), "stream")), mode_(mode), encoder_(model_) {
    for (std::size_t s = 0; s < kStages; ++s) {
        signal_.adaconv[s] = nn::AdaConvState(stages()[s]);
    }
    for (std::size_t c = 0; c < kLanes; ++c) {
        signal_.up2[c] = dsp::Upsampler2x(mode, fir_length);
    }
    const std::size_t sub16 = kFrameIn / kSubframes;
    const std::size_t sub32 = 2 * sub16;
    const std::size_t sub48 = 3 * sub16;
    latents_.resize(kSubframes * model_->config().latent_dim);
    y1_.resize(kLanes * sub16);
    lanes32_.resize(kLanes * sub32);
    y2_.resize(kLanes * sub32);
    lanes48_.resize(kLanes * sub48);
    contrib2_.resize(kLanes * kLanes * sub32);
    contrib3_.resize(kLanes * sub48);
    shape_scratch_.resize(std::max(model_->adashape(0).scratch_size(), model_->adashape(1).scratch_size()));
    pending_.reserve(kFrameIn);
}

void Stream::reset() {
    features_.reset();
    encoder_.reset();
    for (auto& s : signal_.adaconv) {
        s.reset();
    }
    for (auto& u : signal_.up2) {
        u.reset();
    }
    for (auto& u : signal_.up15) {
        u.reset();
    }
    pending_.clear();
}

void Stream::extend_frame(std::span<const float> in, std::span<float> out, FrameTaps* taps) {
    if (!model_) {
        throw StateError("extend_frame: no model loaded");
    }
    if (in.size() != kFrameIn) {
        throw InvalidInput("extend_frame: expected 160 samples, got " + std::to_string(in.size()));
    }
    if (out.size() != kFrameOut) {
        throw InvalidInput("extend_frame: output must hold 480 samples");
    }
    if (taps) {
        for (auto& v : taps->y48) {
            v.resize(kFrameOut);
        }
        for (auto& v : taps->y32) {
            v.resize(kFrame32);
        }
        taps->y32_full.resize(kFrame32);
    }

    const auto frame = features_.push(in);
    encoder_.push(frame, latents_);

    const Model& m = *model_;
    const std::size_t L = m.config().latent_dim;
    const std::size_t sub16 = kFrameIn / kSubframes;
    const std::size_t sub32 = 2 * sub16;
    const std::size_t sub48 = 3 * sub16;

    for (std::size_t s = 0; s < kSubframes; ++s) {
        const auto phi = std::span<const float>(latents_).subspan(s * L, L);

        m.adaconv(0).process(signal_.adaconv[0], in.subspan(s * sub16, sub16), phi, y1_);
        for (std::size_t c = 0; c < kLanes; ++c) {
            signal_.up2[c].process(std::span<const float>(y1_).subspan(c * sub16, sub16),
                                   std::span(lanes32_).subspan(c * sub32, sub32));
        }
        auto shape32 = std::span(lanes32_).subspan(sub32, sub32);
        m.adashape(0).process(shape32, phi, shape32, shape_scratch_);
        auto nl32 = std::span(lanes32_).subspan(2 * sub32, sub32);
        dsp::nonlin_extend(nl32, nl32);

        m.adaconv(1).process(signal_.adaconv[1], lanes32_, phi, y2_,
                             taps ? std::span<float>(contrib2_) : std::span<float>());
        for (std::size_t c = 0; c < kLanes; ++c) {
            signal_.up15[c].process(std::span<const float>(y2_).subspan(c * sub32, sub32),
                                    std::span(lanes48_).subspan(c * sub48, sub48));
        }
        auto shape48 = std::span(lanes48_).subspan(sub48, sub48);
        m.adashape(1).process(shape48, phi, shape48, shape_scratch_);
        auto nl48 = std::span(lanes48_).subspan(2 * sub48, sub48);
        dsp::nonlin_extend(nl48, nl48);

        m.adaconv(2).process(signal_.adaconv[2], lanes48_, phi, out.subspan(s * sub48, sub48),
                             taps ? std::span<float>(contrib3_) : std::span<float>());

        if (taps) {
            for (std::size_t c = 0; c < kLanes; ++c) {
                std::copy_n(contrib3_.begin() + c * sub48, sub48, taps->y48[c].begin() + s * sub48);
                std::copy_n(contrib2_.begin() + c * sub32, sub32, taps->y32[c].begin() + s * sub32);
            }
            std::copy_n(y2_.begin(), sub32, taps->y32_full.begin() + s * sub32);
        }
    }
}

std::vector<float> Stream::push(std::span<const float> in) {
    if (!model_) {
        throw StateError("push: no model loaded");
    }
    const std::size_t frames = (pending_.size() + in.size()) / kFrameIn;
    std::vector<float> out(frames * kFrameOut);
    std::size_t used = 0;
    for (std::size_t f = 0; f < frames; ++f) {
        auto dst = std::span(out).subspan(f * kFrameOut, kFrameOut);
        if (!pending_.empty()) {
            const std::size_t need = kFrameIn - pending_.size();
            pending_.insert(pending_.end(), in.begin(), in.begin() + need);
            used = need;
            extend_frame(pending_, dst);
            pending_.clear();
        } else {
            extend_frame(in.subspan(used, kFrameIn), dst);
            used += kFrameIn;
        }
    }
    pending_.insert(pending_.end(), in.begin() + used, in.end());
    return out;
}

// ---------------------------------------------------------------------------
// offline helpers

namespace {

template <typename Fn>
void for_each_padded_frame(const SampleBuffer& x, Fn&& fn) {
    std::array<float, kFrameIn> frame{};
    const std::size_t n = x.size();
    for (std::size_t pos = 0; pos < n; pos += kFrameIn) {
        const std::size_t take = std::min(kFrameIn, n - pos);
        std::fill(frame.begin(), frame.end(), 0.0f);
        std::copy_n(x.samples.begin() + pos, take, frame.begin());
        fn(std::span<const float>(frame), pos);
    }
}

} // namespace

SampleBuffer extend_offline(std::shared_ptr<const Model> model, const SampleBuffer& x, dsp::ResamplerMode mode) {
    require_rate(x, kRate16k, "extend_offline");
    Stream stream(std::move(model), mode);
    std::vector<float> y(((x.size() + kFrameIn - 1) / kFrameIn) * kFrameOut);
    for_each_padded_frame(x, [&](std::span<const float> frame, std::size_t pos) {
        stream.extend_frame(frame, std::span(y).subspan(3 * pos, kFrameOut));
    });
    y.resize(3 * x.size());
    return SampleBuffer(std::move(y), kRate48k);
}

Decomposition decompose(std::shared_ptr<const Model> model, const SampleBuffer& x, dsp::ResamplerMode mode) {
    require_rate(x, kRate16k, "decompose");
    Stream stream(std::move(model), mode);
    const std::size_t frames = (x.size() + kFrameIn - 1) / kFrameIn;
    Decomposition d;
    std::array<SampleBuffer*, kLanes> parts48 = {&d.bypass, &d.adashape, &d.nonlin};
    std::array<SampleBuffer*, kLanes> parts32 = {&d.y32_bypass, &d.y32_adashape, &d.y32_nonlin};
    d.y48.samples.resize(frames * kFrameOut);
    d.y32.samples.resize(frames * kFrame32);
    for (std::size_t c = 0; c < kLanes; ++c) {
        parts48[c]->samples.resize(frames * kFrameOut);
        parts32[c]->samples.resize(frames * kFrame32);
    }
    FrameTaps taps;
    for_each_padded_frame(x, [&](std::span<const float> frame, std::size_t pos) {
        const std::size_t f = pos / kFrameIn;
        stream.extend_frame(frame, std::span(d.y48.samples).subspan(f * kFrameOut, kFrameOut), &taps);
        for (std::size_t c = 0; c < kLanes; ++c) {
            std::copy(taps.y48[c].begin(), taps.y48[c].end(), parts48[c]->samples.begin() + f * kFrameOut);
            std::copy(taps.y32[c].begin(), taps.y32[c].end(), parts32[c]->samples.begin() + f * kFrame32);
        }
        std::copy(taps.y32_full.begin(), taps.y32_full.end(), d.y32.samples.begin() + f * kFrame32);
    });
    d.y48.samples.resize(3 * x.size());
    d.y32.samples.resize(2 * x.size());
    for (std::size_t c = 0; c < kLanes; ++c) {
        parts48[c]->samples.resize(3 * x.size());
        parts32[c]->samples.resize(2 * x.size());
    }
    return d;
}

Report report(const Model& model, dsp::ResamplerMode mode) {
    Report r;
    r.params = model.params();
    r.mflops = model.mflops();
    r.mmacs = nn::mmacs_from_mflops(r.mflops);
    r.delay48 = dsp::measure_cascade_delay(mode);
    return r;
}

} // namespace bbwe::model
