// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#include "bbwe/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bbwe/error.hpp"

namespace bbwe::nn {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw InvalidInput(what);
    }
}

float sigmoid(float v) { return 1.0f / (1.0f + std::exp(-v)); }

std::vector<float> raised_cosine(std::size_t n) {
    std::vector<float> w(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double phase = std::numbers::pi * (static_cast<double>(t) + 0.5) / static_cast<double>(n);
        w[t] = static_cast<float>(0.5 - 0.5 * std::cos(phase));
    }
    return w;
}

// acc[t] = sum_j taps[j] * ext[t + j], taps in ascending order.
void correlate(std::span<const float> taps, const float* ext, float* acc, std::size_t n) {
    std::fill(acc, acc + n, 0.0f);
    for (std::size_t j = 0; j < taps.size(); ++j) {
        const float w = taps[j];
        const float* src = ext + j;
        for (std::size_t t = 0; t < n; ++t) {
            acc[t] += w * src[t];
        }
    }
}

} // namespace

Tensor conv1d(const Tensor& x, const Tensor& w, std::span<const float> bias) {
    require(x.rank() == 2, "conv1d: input must be [C_in x T], got " + x.shape_string());
    require(w.rank() == 3, "conv1d: weight must be [C_out x C_in x k], got " + w.shape_string());
    const std::size_t cin = x.dim(0);
    const std::size_t len = x.dim(1);
    const std::size_t cout = w.dim(0);
    const std::size_t k = w.dim(2);
    require(w.dim(1) == cin, "conv1d: weight " + w.shape_string() + " does not match input " + x.shape_string());
    require(bias.empty() || bias.size() == cout, "conv1d: bias length mismatch");

    Tensor y({cout, len});
    for (std::size_t t = 0; t < len; ++t) {
        for (std::size_t o = 0; o < cout; ++o) {
            float acc = bias.empty() ? 0.0f : bias[o];
            for (std::size_t c = 0; c < cin; ++c) {
                for (std::size_t j = 0; j < k; ++j) {
                    const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + j) - static_cast<std::ptrdiff_t>(k - 1);
                    if (src >= 0) {
                        acc += w(o, c, j) * x(c, static_cast<std::size_t>(src));
                    }
                }
            }
            y(o, t) = acc;
        }
    }
    return y;
}

Tensor tconv1d(const Tensor& x, const Tensor& w, std::span<const float> bias) {
    require(x.rank() == 2, "tconv1d: input must be [C_in x T], got " + x.shape_string());
    require(w.rank() == 3 && w.dim(2) == 2, "tconv1d: weight must be [C_in x C_out x 2], got " + w.shape_string());
    const std::size_t cin = x.dim(0);
    const std::size_t len = x.dim(1);
    const std::size_t cout = w.dim(1);
    require(w.dim(0) == cin, "tconv1d: weight " + w.shape_string() + " does not match input " + x.shape_string());
    require(bias.empty() || bias.size() == cout, "tconv1d: bias length mismatch");

    Tensor y({cout, 2 * len});
    for (std::size_t t = 0; t < len; ++t) {
        for (std::size_t j = 0; j < 2; ++j) {
            for (std::size_t o = 0; o < cout; ++o) {
                float acc = bias.empty() ? 0.0f : bias[o];
                for (std::size_t c = 0; c < cin; ++c) {
                    acc += w(c, o, j) * x(c, t);
                }
                y(o, 2 * t + j) = acc;
            }
        }
    }
    return y;
}

Dense::Dense(const Tensor& weight, std::span<const float> bias) {
    require(weight.rank() == 2, "dense: weight must be [out x in], got " + weight.shape_string());
    *this = Dense(weight.dim(0), weight.dim(1), weight.data(), bias);
}

Dense::Dense(std::size_t out_dim, std::size_t in_dim, std::span<const float> weight_row_major,
             std::span<const float> bias)
    : in_dim_(in_dim), out_dim_(out_dim), weight_t_(in_dim * out_dim), bias_(out_dim, 0.0f) {
    require(weight_row_major.size() == in_dim * out_dim, "dense: weight length mismatch");
    require(bias.empty() || bias.size() == out_dim, "dense: bias length mismatch");
    for (std::size_t o = 0; o < out_dim; ++o) {
        for (std::size_t i = 0; i < in_dim; ++i) {
            weight_t_[i * out_dim + o] = weight_row_major[o * in_dim + i];
        }
    }
    std::copy(bias.begin(), bias.end(), bias_.begin());
}

void Dense::apply(std::span<const float> x, std::span<float> y) const {
    require(x.size() == in_dim_ && y.size() == out_dim_, "dense: expected " + std::to_string(in_dim_) + " -> " +
                                                             std::to_string(out_dim_) + ", got " +
                                                             std::to_string(x.size()) + " -> " +
                                                             std::to_string(y.size()));
    float* out = y.data();
    std::copy(bias_.begin(), bias_.end(), out);
    const float* w = weight_t_.data();
    for (std::size_t i = 0; i < in_dim_; ++i) {
        const float xi = x[i];
        const float* col = w + i * out_dim_;
        for (std::size_t o = 0; o < out_dim_; ++o) {
            out[o] += col[o] * xi;
        }
    }
}

Gru::Gru(const GruWeights& w) {
    require(w.weight_ih.rank() == 2 && w.weight_hh.rank() == 2, "gru: weights must be rank 2");
    const std::size_t h3 = w.weight_hh.dim(0);
    require(h3 % 3 == 0 && w.weight_hh.dim(1) * 3 == h3, "gru: weight_hh must be [3H x H], got " +
                                                             w.weight_hh.shape_string());
    require(w.weight_ih.dim(0) == h3, "gru: weight_ih must have 3H rows, got " + w.weight_ih.shape_string());
    require(w.bias_ih.size() == h3 && w.bias_hh.size() == h3, "gru: biases must have 3H entries");
    hidden_ = h3 / 3;
    input_ = Dense(w.weight_ih, w.bias_ih.data());
    recurrent_ = Dense(w.weight_hh, w.bias_hh.data());
}

void Gru::step(std::span<const float> x, std::span<float> h, std::span<float> scratch) const {
    require(h.size() == hidden_, "gru: state length mismatch");
    require(scratch.size() >= scratch_size(), "gru: scratch too small");
    const std::size_t n = hidden_;
    auto gi = scratch.first(3 * n);
    auto gh = scratch.subspan(3 * n, 3 * n);
    input_.apply(x, gi);
    recurrent_.apply(h, gh);
    for (std::size_t i = 0; i < n; ++i) {
        const float r = sigmoid(gi[i] + gh[i]);
        const float z = sigmoid(gi[n + i] + gh[n + i]);
        const float c = std::tanh(gi[2 * n + i] + r * gh[2 * n + i]);
        h[i] = (1.0f - z) * c + z * h[i];
    }
}

void gru_step(const Gru& gru, std::span<const float> x, std::span<float> h) {
    std::vector<float> scratch(gru.scratch_size());
    gru.step(x, h, scratch);
}

AdaConvState::AdaConvState(const AdaConvSpec& spec)
    : history(spec.in_channels * (spec.kernel_size - 1), 0.0f),
      prev_kernel(spec.kernel_elements(), 0.0f),
      kernel(spec.kernel_elements(), 0.0f),
      gains(spec.out_channels, 0.0f),
      extended(spec.in_channels * (spec.kernel_size - 1 + spec.subframe()), 0.0f),
      acc_prev(spec.subframe(), 0.0f),
      acc_cur(spec.subframe(), 0.0f),
      partial(spec.subframe(), 0.0f) {}

void AdaConvState::reset() {
    std::fill(history.begin(), history.end(), 0.0f);
    std::fill(prev_kernel.begin(), prev_kernel.end(), 0.0f);
    has_prev = false;
}

AdaConv::AdaConv(const AdaConvSpec& spec, const AdaConvWeights& w) : spec_(spec) {
    require(spec.in_channels > 0 && spec.out_channels > 0 && spec.kernel_size > 0,
            "adaconv: channel counts and kernel size must be positive");
    require(spec.rate % kAdaptationRate == 0, "adaconv: rate must be a multiple of 200 Hz");
    require(w.kernel_weight.rank() == 2 && w.kernel_weight.dim(0) == spec.kernel_elements(),
            "adaconv: kernel weight must have " + std::to_string(spec.kernel_elements()) + " rows, got " +
                w.kernel_weight.shape_string());
    const std::size_t latent = w.kernel_weight.dim(1);
    require(w.gain_weight.has_dims({spec.out_channels, latent}),
            "adaconv: gain weight shape " + w.gain_weight.shape_string());
    require(w.kernel_bias.size() == spec.kernel_elements() && w.gain_bias.size() == spec.out_channels,
            "adaconv: bias length mismatch");
    kernel_ = Dense(w.kernel_weight, w.kernel_bias.data());
    gain_ = Dense(w.gain_weight, w.gain_bias.data());
    fade_in_ = raised_cosine(spec.subframe());
}

void AdaConv::predict_kernel(std::span<const float> latent, std::span<float> kernel,
                             std::span<float> gains) const {
    kernel_.apply(latent, kernel);
    gain_.apply(latent, gains);
    const std::size_t slice = spec_.in_channels * spec_.kernel_size;
    for (std::size_t o = 0; o < spec_.out_channels; ++o) {
        auto k = kernel.subspan(o * slice, slice);
        double energy = 0.0;
        for (float v : k) {
            energy += static_cast<double>(v) * v;
        }
        const double norm = std::sqrt(energy);
        if (norm < kKernelNormEpsilon) {
            std::fill(k.begin(), k.end(), 0.0f);
            continue;
        }
        const double g = std::exp(std::clamp(static_cast<double>(gains[o]), -double{kGainClamp}, double{kGainClamp}));
        const double scale = g / norm;
        for (float& v : k) {
            v = static_cast<float>(v * scale);
        }
    }
}

void AdaConv::process(AdaConvState& state, std::span<const float> x, std::span<const float> latent,
                      std::span<float> y, std::span<float> contributions) const {
    const std::size_t cin = spec_.in_channels;
    const std::size_t cout = spec_.out_channels;
    const std::size_t k = spec_.kernel_size;
    const std::size_t n = spec_.subframe();
    const std::size_t span_len = k - 1 + n;
    require(x.size() == cin * n, "adaconv: input must be [" + std::to_string(cin) + " x " + std::to_string(n) + "]");
    require(y.size() == cout * n, "adaconv: output must be [" + std::to_string(cout) + " x " + std::to_string(n) + "]");
    require(latent.size() == latent_dim(), "adaconv: latent length mismatch");
    require(contributions.empty() || contributions.size() == cout * cin * n, "adaconv: contribution buffer size");
    require(state.history.size() == cin * (k - 1), "adaconv: state does not match layer shape");

    predict_kernel(latent, state.kernel, state.gains);
    if (!state.has_prev) {
        state.prev_kernel = state.kernel;
        state.has_prev = true;
    }
    const bool steady = state.prev_kernel == state.kernel;

    for (std::size_t c = 0; c < cin; ++c) {
        float* ext = state.extended.data() + c * span_len;
        std::copy_n(state.history.begin() + c * (k - 1), k - 1, ext);
        std::copy_n(x.begin() + c * n, n, ext + k - 1);
    }

    const float* fade = fade_in_.data();
    for (std::size_t o = 0; o < cout; ++o) {
        float* yo = y.data() + o * n;
        std::fill(yo, yo + n, 0.0f);
        for (std::size_t c = 0; c < cin; ++c) {
            const float* ext = state.extended.data() + c * span_len;
            const std::size_t off = (o * cin + c) * k;
            float* part = state.partial.data();
            correlate(std::span(state.kernel).subspan(off, k), ext, state.acc_cur.data(), n);
            if (steady) {
                std::copy_n(state.acc_cur.data(), n, part);
            } else {
                correlate(std::span(state.prev_kernel).subspan(off, k), ext, state.acc_prev.data(), n);
                for (std::size_t t = 0; t < n; ++t) {
                    part[t] = (1.0f - fade[t]) * state.acc_prev[t] + fade[t] * state.acc_cur[t];
                }
            }
            for (std::size_t t = 0; t < n; ++t) {
                yo[t] += part[t];
            }
            if (!contributions.empty()) {
                std::copy_n(part, n, contributions.data() + (o * cin + c) * n);
            }
        }
    }

    for (std::size_t c = 0; c < cin; ++c) {
        const float* ext = state.extended.data() + c * span_len;
        std::copy_n(ext + n, k - 1, state.history.begin() + c * (k - 1));
    }
    std::swap(state.prev_kernel, state.kernel);
}

AdaShape::AdaShape(const AdaShapeWeights& w) {
    require(w.hidden_weight.rank() == 2 && w.hidden_weight.dim(1) >= 1,
            "adashape: hidden weight must be [H x (latent + 1)], got " + w.hidden_weight.shape_string());
    require(w.out_weight.rank() == 2 && w.out_weight.dim(1) == w.hidden_weight.dim(0),
            "adashape: out weight must be [T x H], got " + w.out_weight.shape_string());
    hidden_ = Dense(w.hidden_weight, w.hidden_bias.data());
    out_ = Dense(w.out_weight, w.out_bias.data());
}

void AdaShape::gains(std::span<const float> x, std::span<const float> latent, std::span<float> alpha,
                     std::span<float> scratch) const {
    const std::size_t n = subframe();
    require(x.size() == n && alpha.size() == n, "adashape: expected subframe of " + std::to_string(n));
    require(latent.size() == latent_dim(), "adashape: latent length mismatch");
    require(scratch.size() >= scratch_size(), "adashape: scratch too small");

    auto input = scratch.first(hidden_.in_dim());
    auto hidden = scratch.subspan(hidden_.in_dim(), hidden_.out_dim());
    std::copy(latent.begin(), latent.end(), input.begin());
    double energy = 0.0;
    for (float v : x) {
        energy += static_cast<double>(v) * v;
    }
    const double rms = std::sqrt(energy / static_cast<double>(n));
    input.back() = static_cast<float>(std::log10(rms + 1e-9));

    hidden_.apply(input, hidden);
    for (float& v : hidden) {
        v = std::tanh(v);
    }
    out_.apply(hidden, alpha);
    for (float& v : alpha) {
        v = std::exp(std::clamp(v, -kGainClamp, kGainClamp));
    }
}

void AdaShape::process(std::span<const float> x, std::span<const float> latent, std::span<float> y,
                       std::span<float> scratch) const {
    require(y.size() == x.size(), "adashape: output length mismatch");
    auto alpha = scratch.subspan(hidden_.in_dim() + hidden_.out_dim(), out_.out_dim());
    gains(x, latent, alpha, scratch);
    apply_shape(alpha, x, y);
}

void apply_shape(std::span<const float> alpha, std::span<const float> x, std::span<float> y) {
    require(alpha.size() == x.size() && y.size() == x.size(), "adashape: length mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = alpha[i] * x[i];
    }
}

} // namespace bbwe::nn
