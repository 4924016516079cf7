// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include <chrono>

#include "sreldiag/analysis.hpp"

namespace sreldiag {

BenchmarkResult benchmark_inference(const ModelUnderTest& model, const std::vector<std::vector<double>>& patterns,
                                    std::size_t repetitions, std::size_t warmup) {
    if (patterns.empty()) throw InvalidArgument("benchmark needs at least one pattern");
    if (repetitions < 1) throw InvalidArgument("benchmark needs at least one repetition");
    volatile std::size_t sink = 0;
    for (std::size_t w = 0; w < warmup; ++w)
        for (const auto& p : patterns) sink = sink + model.predict(p);
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t r = 0; r < repetitions; ++r)
        for (const auto& p : patterns) sink = sink + model.predict(p);
    const auto t1 = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    BenchmarkResult b;
    b.model_id = model.id;
    b.param_count = model.param_count;
    b.repetitions = repetitions;
    b.samples = patterns.size();
    b.mean_ms_per_sample = ms / static_cast<double>(repetitions * patterns.size());
    return b;
}

}  // namespace sreldiag
