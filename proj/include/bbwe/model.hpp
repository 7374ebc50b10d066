// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bbwe/audio.hpp"
#include "bbwe/dsp.hpp"
#include "bbwe/features.hpp"
#include "bbwe/graph.hpp"
#include "bbwe/nn.hpp"
#include "bbwe/weights.hpp"

namespace bbwe::model {

inline constexpr std::size_t kFrameIn = features::kFrameSize;  // 160 @16k
inline constexpr std::size_t kFrameOut = 3 * kFrameIn;          // 480 @48k
inline constexpr std::size_t kFrame32 = 2 * kFrameIn;           // 320 @32k
inline constexpr std::size_t kSubframes = 2;                    // 5 ms each

// Immutable, validated network. Shareable across streams.
class Model {
public:
    // Validates shapes against the graph and the parameter and complexity
    // budgets. Unknown tensors become warnings.
    static std::shared_ptr<const Model> create(nn::ModelWeights weights);

    const ModelConfig& config() const { return config_; }
    std::size_t params() const { return params_; }
    double mflops() const { return mflops_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    const nn::ModelWeights& weights() const { return weights_; }

    // Streaming encoder pieces. conv taps are stacked oldest frame first.
    const nn::Dense& conv1() const { return conv1_; }
    const nn::Dense& conv2() const { return conv2_; }
    const nn::Dense& tconv(std::size_t j) const { return tconv_[j]; }
    const nn::Gru& gru() const { return gru_; }
    const nn::AdaConv& adaconv(std::size_t stage) const { return adaconv_[stage]; }
    const nn::AdaShape& adashape(std::size_t index) const { return adashape_[index]; }

private:
    Model() = default;

    nn::ModelWeights weights_;
    ModelConfig config_;
    std::size_t params_ = 0;
    double mflops_ = 0.0;
    std::vector<std::string> warnings_;

    nn::Dense conv1_;
    nn::Dense conv2_;
    std::array<nn::Dense, 2> tconv_;
    nn::Gru gru_;
    std::array<nn::AdaConv, kStages> adaconv_;
    std::array<nn::AdaShape, 2> adashape_;
};

struct EncoderState {
    std::vector<float> features;  // last two FeatureFrames, oldest first
    std::vector<float> hidden1;   // last two conv1 outputs
    std::vector<float> h;         // GRU state
};

// Feature encoder: one FeatureFrame in, two latents out.
class Encoder {
public:
    Encoder() = default;
    explicit Encoder(std::shared_ptr<const Model> model);

    // latents receives 2 x latent_dim values, phi_{2n} then phi_{2n+1}.
    void push(const features::FeatureFrame& frame, std::span<float> latents);
    void reset();
    const EncoderState& state() const { return state_; }

private:
    std::shared_ptr<const Model> model_;
    EncoderState state_;
    std::vector<float> conv_in_;
    std::vector<float> a1_;
    std::vector<float> a2_;
    std::vector<float> up_;
    std::vector<float> scratch_;
};

// Whole-sequence encoder built on the reference conv1d / tconv1d kernels.
// Returns [2N x latent_dim] row-major.
std::vector<float> encode_features(const Model& model, std::span<const features::FeatureFrame> frames);

// Per-frame contributions of each lane to the two linear taps.
struct FrameTaps {
    std::array<std::vector<float>, kLanes> y48;  // 480 each: bypass, adashape, nonlin
    std::array<std::vector<float>, kLanes> y32;  // 320 each, into stage-2 output channel 0
    std::vector<float> y32_full;                 // 320, stage-2 output channel 0
};

struct SignalState {
    std::array<nn::AdaConvState, kStages> adaconv;
    std::array<dsp::Upsampler2x, kLanes> up2;
    std::array<dsp::Upsampler15x, kLanes> up15;
};

// One audio stream. A default-constructed stream has no model.
class Stream {
public:
    Stream() = default;
    explicit Stream(std::shared_ptr<const Model> model, dsp::ResamplerMode mode = dsp::ResamplerMode::kIir,
                    std::size_t fir_length = dsp::kDefaultFirLength);

    // Exactly 160 samples in, 480 out.
    void extend_frame(std::span<const float> in, std::span<float> out, FrameTaps* taps = nullptr);

    // Any number of samples; returns 48 kHz output for every completed frame.
    std::vector<float> push(std::span<const float> in);
    std::size_t pending() const { return pending_.size(); }

    void reset();

    bool loaded() const { return model_ != nullptr; }
    const features::FeatureExtractor& feature_state() const { return features_; }
    const Encoder& encoder() const { return encoder_; }
    const SignalState& signal_state() const { return signal_; }

private:
    std::shared_ptr<const Model> model_;
    dsp::ResamplerMode mode_ = dsp::ResamplerMode::kIir;
    features::FeatureExtractor features_;
    Encoder encoder_;
    SignalState signal_;
    std::vector<float> pending_;

    std::vector<float> latents_;
    std::vector<float> y1_, lanes32_, y2_, lanes48_, contrib2_, contrib3_;
    std::vector<float> shape_scratch_;
};

SampleBuffer extend_offline(std::shared_ptr<const Model> model, const SampleBuffer& x,
                            dsp::ResamplerMode mode = dsp::ResamplerMode::kIir);

struct Decomposition {
    SampleBuffer y48{{}, kRate48k};
    SampleBuffer bypass{{}, kRate48k};
    SampleBuffer adashape{{}, kRate48k};
    SampleBuffer nonlin{{}, kRate48k};

    SampleBuffer y32{{}, kRate32k};
    SampleBuffer y32_bypass{{}, kRate32k};
    SampleBuffer y32_adashape{{}, kRate32k};
    SampleBuffer y32_nonlin{{}, kRate32k};
};

Decomposition decompose(std::shared_ptr<const Model> model, const SampleBuffer& x,
                        dsp::ResamplerMode mode = dsp::ResamplerMode::kIir);

struct Report {
    std::size_t params = 0;
    double mflops = 0.0;
    double mmacs = 0.0;
    int delay48 = 0;
};

Report report(const Model& model, dsp::ResamplerMode mode = dsp::ResamplerMode::kIir);

} // namespace bbwe::model
