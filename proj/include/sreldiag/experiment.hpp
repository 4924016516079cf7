// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#pragma once

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "sreldiag/analysis.hpp"
#include "sreldiag/baselines.hpp"
#include "sreldiag/config.hpp"
#include "sreldiag/srel.hpp"

namespace sreldiag {

/// One trained method, whichever kind it is.
struct TrainedModel {
    Method method = Method::Srel;
    GridPtr grid;
    std::shared_ptr<const SrelModel> srel;
    std::shared_ptr<const MulticlassModel> multiclass;
    std::shared_ptr<const RandomForest> forest;
    ForestConfig forest_config;
    std::shared_ptr<const KMeansModel> kmeans;
    Scaler kmeans_scaler;
    std::shared_ptr<const PointFeatureClassifier> point;
    Json training_log;  // per-network epochs and losses, or k-means inertia

    std::string id() const { return std::string(method_name(method)); }
    std::size_t param_count() const;
    /// Predicted class index for a raw dB pattern.
    std::size_t predict(std::span<const double> raw_db) const;
    ModelUnderTest under_test() const;
};

/// Trains `method` on the training split (validation split for early stopping).
TrainedModel train_method(Method method, const LabeledDataset& ds, const RunConfig& cfg);

void save_model(const TrainedModel& m, const std::filesystem::path& dir);
/// Reads any bundle kind, dispatching on the manifest's method field.
TrainedModel load_model(const std::filesystem::path& dir);

/// Synthesizes and splits the configured dataset.
LabeledDataset make_dataset(const RunConfig& cfg);

/// Stage failure in the experiment pipeline; the message names the stage.
class StageError : public std::runtime_error {
public:
    StageError(const std::string& stage, const std::string& what)
        : std::runtime_error("stage '" + stage + "' failed: " + what), stage_(stage) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

struct ExperimentResult {
    LabeledDataset dataset;
    std::vector<TrainedModel> models;
    std::vector<EvalReport> reports;
    NoiseSweepReport sweep;
    TsneResult embedding;
    std::vector<BenchmarkResult> benchmarks;
    Json manifest;
};

/// synth -> train -> evaluate -> noise sweep -> embedding (-> benchmark).
/// Writes every artifact under `out` plus manifest.json. All CSV outputs
/// are pure functions of the config.
ExperimentResult run_experiment(const RunConfig& cfg, const std::filesystem::path& out);

/// t-SNE on the standardized patterns of all samples (training-split scaler).
TsneResult embed_dataset(const LabeledDataset& ds, const TsneConfig& cfg, std::vector<std::size_t>* indices = nullptr);

}  // namespace sreldiag
