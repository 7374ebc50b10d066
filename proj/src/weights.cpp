// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#include "bbwe/weights.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>

#include "bbwe/error.hpp"
#include "le_io.hpp"

namespace bbwe::nn {

std::size_t ModelWeights::param_count() const { return count_params(*this); }

const Tensor& ModelWeights::at(const std::string& name) const {
    auto it = tensors.find(name);
    if (it == tensors.end()) {
        throw ValidationError("missing tensor '" + name + "'");
    }
    return it->second;
}

std::vector<std::uint8_t> serialize_weights(const ModelWeights& w) {
    std::vector<std::uint8_t> out;
    out.insert(out.end(), std::begin(kWeightMagic), std::end(kWeightMagic));
    detail::put_u32(out, w.version);
    detail::put_u32(out, w.latent_dim);
    detail::put_u32(out, static_cast<std::uint32_t>(w.tensors.size()));
    for (const auto& [name, t] : w.tensors) {
        if (name.size() > 0xffff) {
            throw InvalidInput("tensor name too long: " + name.substr(0, 32) + "...");
        }
        detail::put_u16(out, static_cast<std::uint16_t>(name.size()));
        out.insert(out.end(), name.begin(), name.end());
        detail::put_u8(out, static_cast<std::uint8_t>(t.rank()));
        for (std::size_t d : t.dims()) {
            detail::put_u32(out, static_cast<std::uint32_t>(d));
        }
        for (float v : t.data()) {
            detail::put_f32(out, v);
        }
    }
    return out;
}

ModelWeights parse_weights(std::span<const std::uint8_t> bytes) {
    detail::ByteReader in(bytes);
    const auto magic = in.take(4, "magic");
    if (!std::equal(magic.begin(), magic.end(), std::begin(kWeightMagic))) {
        throw FormatError("bad magic, expected \"BBWE\"");
    }
    ModelWeights w;
    w.version = in.u32("version");
    if (w.version != kWeightVersion) {
        throw FormatError("unsupported weight file version " + std::to_string(w.version));
    }
    w.latent_dim = in.u32("latent_dim");
    const std::uint32_t count = in.u32("tensor_count");
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint16_t len = in.u16("name length");
        const auto raw = in.take(len, "tensor name");
        std::string name(raw.begin(), raw.end());
        const std::uint8_t rank = in.u8("ndims");
        if (rank < 1 || rank > 3) {
            throw FormatError("tensor '" + name + "' has ndims " + std::to_string(rank) + ", expected 1..3");
        }
        std::vector<std::size_t> dims(rank);
        std::size_t n = 1;
        for (auto& d : dims) {
            d = in.u32("extent");
            n *= d;
        }
        if (n > in.remaining() / 4) {
            throw FormatError("truncated input while reading data of '" + name + "'");
        }
        const auto data = in.take(4 * n, "tensor data");
        std::vector<float> values(n);
        for (std::size_t k = 0; k < n; ++k) {
            values[k] = detail::load_f32(data.data() + 4 * k);
        }
        if (w.tensors.contains(name)) {
            throw FormatError("duplicate tensor '" + name + "'");
        }
        try {
            w.tensors.emplace(name, Tensor(std::move(dims), std::move(values)));
        } catch (const InvalidInput& e) {
            throw ValidationError("tensor '" + name + "': " + e.what());
        }
    }
    if (in.remaining() != 0) {
        throw FormatError(std::to_string(in.remaining()) + " trailing bytes after last tensor");
    }
    return w;
}

void validate_weights(ModelWeights& w, const ShapeTable& table) {
    std::set<std::string> known;
    for (const auto& spec : table) {
        known.insert(spec.name);
        const Tensor& t = w.at(spec.name);
        if (!t.has_dims(spec.dims)) {
            throw ValidationError("tensor '" + spec.name + "' has shape " + t.shape_string() + ", expected " +
                                  shape_string(spec.dims));
        }
    }
    for (const auto& [name, t] : w.tensors) {
        if (!known.contains(name)) {
            w.warnings.push_back("ignoring unknown tensor '" + name + "' " + t.shape_string());
        }
    }
}

std::size_t count_params(const ModelWeights& w) {
    std::size_t n = 0;
    for (const auto& [name, t] : w.tensors) {
        n += t.size();
    }
    return n;
}

ModelWeights read_weight_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open weight file " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return parse_weights(bytes);
}

void write_weight_file(const std::filesystem::path& path, const ModelWeights& w) {
    const auto bytes = serialize_weights(w);
    std::ofstream f(path, std::ios::binary);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) {
        throw IoError("cannot write weight file " + path.string());
    }
}

} // namespace bbwe::nn
