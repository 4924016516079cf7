// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sreldiag/analysis.hpp"
#include "sreldiag/baselines.hpp"
#include "sreldiag/dataset.hpp"
#include "sreldiag/json_io.hpp"
#include "sreldiag/nn.hpp"

namespace sreldiag {

enum class Method { Srel, Multiclass, Rf, Kmeans, PointRf };

std::string_view method_name(Method m);
/// Throws ConfigError for unknown names.
Method parse_method(std::string_view s);

struct GridConfig {
    double f_min_hz = 10e6;
    double f_max_hz = 14e9;
    std::size_t points = 201;

    GridPtr make() const;
};

struct NetworkConfig {
    Backbone backbone = Backbone::Mlp;
    std::vector<std::size_t> hidden{64};
    int cnn_layers = 1;

    NetworkSpec spec(std::size_t input_dim) const;
};

struct RunConfig {
    std::uint64_t seed = 42;
    unsigned threads = 1;
    GridConfig grid;
    ClassCounts counts = kPaperClassCounts;
    SplitRatios split;
    SynthesisConfig synthesis;
    NetworkConfig network;
    TrainConfig train;  // seed field unused; per-method seeds derive from `seed`
    ForestConfig forest;
    KMeansConfig kmeans;
    PointFeatureKind point_feature = PointFeatureKind::SingleFrequencyDb;
    double point_frequency_hz = kDesignatedFrequencyHz;
    NoiseSweepConfig noise;
    TsneConfig tsne;
    std::vector<Method> methods{Method::Srel, Method::Multiclass, Method::Rf, Method::Kmeans, Method::PointRf};
    bool benchmark = true;
    std::size_t benchmark_repetitions = 100;

    /// Throws ConfigError.
    void validate() const;

    // Stage seeds.
    std::uint64_t synth_seed() const { return derive_seed(seed, 1); }
    std::uint64_t split_seed() const { return derive_seed(seed, 2); }
    std::uint64_t method_seed(Method m) const { return derive_seed(seed, 10 + static_cast<std::uint64_t>(m)); }
    std::uint64_t tsne_seed() const { return derive_seed(seed, 3); }
};

Json config_to_json(const RunConfig& c);
/// Missing keys keep their defaults; unknown keys and bad values raise ConfigError.
RunConfig config_from_json(const Json& j);
RunConfig load_config(const std::filesystem::path& path);

/// FNV-1a over the canonical JSON dump of the resolved config.
std::uint64_t config_hash(const RunConfig& c);

}  // namespace sreldiag
