// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bbwe/tensor.hpp"

namespace bbwe::nn {

// Causal 1-D cross-correlation, stride 1, k-1 zeros of left padding.
// x: [C_in x T], w: [C_out x C_in x k], bias: C_out (or empty) -> [C_out x T].
Tensor conv1d(const Tensor& x, const Tensor& w, std::span<const float> bias);

// Transposed convolution with kernel 2 and stride 2 (non-overlapping).
// x: [C_in x T], w: [C_in x C_out x 2] -> [C_out x 2T] with
// out[:, 2t + j] = w[:, :, j]^T x[:, t] + b.
Tensor tconv1d(const Tensor& x, const Tensor& w, std::span<const float> bias);

// Affine map y = W x + b. The weight is given as [out x in] and kept
// transposed so the product runs as column updates over contiguous memory.
class Dense {
public:
    Dense() = default;
    Dense(const Tensor& weight, std::span<const float> bias);
    Dense(std::size_t out_dim, std::size_t in_dim, std::span<const float> weight_row_major,
          std::span<const float> bias);

    std::size_t in_dim() const { return in_dim_; }
    std::size_t out_dim() const { return out_dim_; }

    void apply(std::span<const float> x, std::span<float> y) const;

private:
    std::size_t in_dim_ = 0;
    std::size_t out_dim_ = 0;
    std::vector<float> weight_t_;  // [in x out]
    std::vector<float> bias_;
};

// Gated recurrent unit, gate order (reset, update, candidate):
//   r = s(W_ir x + b_ir + W_hr h + b_hr)
//   z = s(W_iz x + b_iz + W_hz h + b_hz)
//   n = tanh(W_in x + b_in + r * (W_hn h + b_hn))
//   h' = (1 - z) * n + z * h
struct GruWeights {
    Tensor weight_ih;  // [3H x I]
    Tensor weight_hh;  // [3H x H]
    Tensor bias_ih;    // [3H]
    Tensor bias_hh;    // [3H]
};

class Gru {
public:
    Gru() = default;
    explicit Gru(const GruWeights& w);

    std::size_t input_dim() const { return input_.in_dim(); }
    std::size_t hidden_dim() const { return hidden_; }
    std::size_t scratch_size() const { return 6 * hidden_; }

    // Updates h in place.
    void step(std::span<const float> x, std::span<float> h, std::span<float> scratch) const;

private:
    std::size_t hidden_ = 0;
    Dense input_;
    Dense recurrent_;
};

void gru_step(const Gru& gru, std::span<const float> x, std::span<float> h);

// ---------------------------------------------------------------------------
// AdaConv: convolution whose kernels are re-predicted from the latent at
// 200 Hz. Per output channel the predicted kernel is normalized to unit L2
// over (C_in * k) and scaled by exp(clamp(gain, +-6)). Within a subframe the
// output crossfades from the previous kernel to the new one with
// complementary raised-cosine ramps.
// ---------------------------------------------------------------------------
inline constexpr float kGainClamp = 6.0f;
inline constexpr float kKernelNormEpsilon = 1e-12f;
inline constexpr int kAdaptationRate = 200;

struct AdaConvSpec {
    std::size_t in_channels = 1;
    std::size_t out_channels = 1;
    std::size_t kernel_size = 15;
    int rate = 16000;

    std::size_t subframe() const { return static_cast<std::size_t>(rate / kAdaptationRate); }
    std::size_t kernel_elements() const { return out_channels * in_channels * kernel_size; }
};

struct AdaConvWeights {
    Tensor kernel_weight;  // [C_out * C_in * k x latent]
    Tensor kernel_bias;    // [C_out * C_in * k]
    Tensor gain_weight;    // [C_out x latent]
    Tensor gain_bias;      // [C_out]
};

struct AdaConvState {
    AdaConvState() = default;
    explicit AdaConvState(const AdaConvSpec& spec);
    void reset();

    std::vector<float> history;      // [C_in x (k - 1)]
    std::vector<float> prev_kernel;  // [C_out x C_in x k]
    bool has_prev = false;

    // scratch
    std::vector<float> kernel;
    std::vector<float> gains;
    std::vector<float> extended;  // [C_in x (k - 1 + T)]
    std::vector<float> acc_prev;
    std::vector<float> acc_cur;
    std::vector<float> partial;
};

class AdaConv {
public:
    AdaConv() = default;
    AdaConv(const AdaConvSpec& spec, const AdaConvWeights& w);

    const AdaConvSpec& spec() const { return spec_; }
    std::size_t latent_dim() const { return kernel_.in_dim(); }

    // Normalized, gain-scaled kernel [C_out x C_in x k] for one latent.
    void predict_kernel(std::span<const float> latent, std::span<float> kernel,
                        std::span<float> gains) const;

    // One subframe: x is [C_in x T], y is [C_out x T]. When contributions
    // is non-empty ([C_out x C_in x T]) it receives the part of each output
    // channel stemming from each input channel; y is their in-order sum.
    void process(AdaConvState& state, std::span<const float> x, std::span<const float> latent,
                 std::span<float> y, std::span<float> contributions = {}) const;

    // Crossfade ramp applied to the new kernel; 1 - ramp goes to the old one.
    std::span<const float> fade_in() const { return fade_in_; }

private:
    AdaConvSpec spec_;
    Dense kernel_;
    Dense gain_;
    std::vector<float> fade_in_;
};

// ---------------------------------------------------------------------------
// AdaShape: y(n) = alpha(n) x(n) with alpha = exp(clamp(u, +-6)) and
// u = W2 tanh(W1 [latent, log10(rms(x) + 1e-9)] + b1) + b2.
// ---------------------------------------------------------------------------
struct AdaShapeWeights {
    Tensor hidden_weight;  // [H x (latent + 1)]
    Tensor hidden_bias;    // [H]
    Tensor out_weight;     // [T x H]
    Tensor out_bias;       // [T]
};

class AdaShape {
public:
    AdaShape() = default;
    explicit AdaShape(const AdaShapeWeights& w);

    std::size_t subframe() const { return out_.out_dim(); }
    std::size_t latent_dim() const { return hidden_.in_dim() - 1; }
    std::size_t scratch_size() const { return hidden_.in_dim() + hidden_.out_dim() + out_.out_dim(); }

    void gains(std::span<const float> x, std::span<const float> latent, std::span<float> alpha,
               std::span<float> scratch) const;
    void process(std::span<const float> x, std::span<const float> latent, std::span<float> y,
                 std::span<float> scratch) const;

private:
    Dense hidden_;
    Dense out_;
};

// Elementwise alpha * x.
void apply_shape(std::span<const float> alpha, std::span<const float> x, std::span<float> y);

} // namespace bbwe::nn
