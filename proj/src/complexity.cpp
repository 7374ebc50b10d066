// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#include "bbwe/complexity.hpp"

namespace bbwe::nn {

double count_flops(const CostGraph& graph) {
    double total = 0.0;
    for (const auto& layer : graph) {
        total += layer.flops_per_second();
    }
    return total / 1e6;
}

CostSummary summarize(const CostGraph& graph) {
    CostSummary s;
    s.mflops = count_flops(graph);
    s.mmacs = mmacs_from_mflops(s.mflops);
    for (const auto& layer : graph) {
        s.per_layer.emplace_back(layer.name, layer.flops_per_second() / 1e6);
    }
    return s;
}

} // namespace bbwe::nn
