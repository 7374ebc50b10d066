// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>
#include <vector>

namespace bbwe::nn {

// One node of the analytic cost model: per-invocation multiply-accumulates
// and other arithmetic, invoked rate_hz times per second.
struct LayerCost {
    std::string name;
    double rate_hz = 0.0;
    double macs = 0.0;
    double other = 0.0;

    double flops_per_second() const { return rate_hz * (2.0 * macs + other); }
};

using CostGraph = std::vector<LayerCost>;

// MFLOPS of the graph: a MAC counts as two operations.
double count_flops(const CostGraph& graph);
inline double mmacs_from_mflops(double mflops) { return mflops / 2.0; }

struct CostSummary {
    double mflops = 0.0;
    double mmacs = 0.0;
    std::vector<std::pair<std::string, double>> per_layer;  // MFLOPS
};

CostSummary summarize(const CostGraph& graph);

} // namespace bbwe::nn
