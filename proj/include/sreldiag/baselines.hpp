// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#pragma once

// Comparison methods: softmax multiclass network, random forest (CART/Gini),
// k-means with majority label mapping, and single-frequency point features.

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "sreldiag/dataset.hpp"
#include "sreldiag/nn.hpp"

namespace sreldiag {

// ---- random forest ----------------------------------------------------------

struct ForestConfig {
    std::size_t n_trees = 100;
    std::size_t max_depth = 5;
    std::size_t min_samples_split = 2;
    std::size_t max_features = 0;  // 0: floor(sqrt(n_features))
    bool bootstrap = true;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Gini impurity 1 - sum p_c^2 of a class-count vector (0 for an empty node).
double gini(std::span<const std::size_t> counts);

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;  // go left when x[feature] <= threshold
    int left = -1;
    int right = -1;
    std::size_t label = 0;
    std::size_t samples = 0;
    std::size_t depth = 0;

    bool operator==(const TreeNode&) const = default;
};

class DecisionTree {
public:
    DecisionTree() = default;
    explicit DecisionTree(std::vector<TreeNode> nodes);

    /// CART on the given rows (duplicates allowed, as from a bootstrap draw).
    static DecisionTree fit(const Matrix& x, std::span<const std::size_t> labels, std::size_t n_classes,
                            std::span<const std::size_t> rows, const ForestConfig& cfg, Rng& rng);

    std::size_t predict(std::span<const double> x) const;
    std::size_t depth() const;
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    bool operator==(const DecisionTree&) const = default;

private:
    std::vector<TreeNode> nodes_;
};

class RandomForest {
public:
    RandomForest() = default;
    RandomForest(std::vector<DecisionTree> trees, std::size_t n_classes, std::size_t n_features);

    /// Tree t uses seed derive_seed(cfg.seed, t); the result does not depend on `threads`.
    static RandomForest train(const Matrix& x, std::span<const std::size_t> labels, std::size_t n_classes,
                              const ForestConfig& cfg, unsigned threads = 1);

    std::vector<std::size_t> votes(std::span<const double> x) const;
    /// Majority vote, lowest class index on ties.
    std::size_t predict(std::span<const double> x) const;

    const std::vector<DecisionTree>& trees() const { return trees_; }
    std::size_t n_classes() const { return n_classes_; }
    std::size_t n_features() const { return n_features_; }
    std::size_t node_count() const;
    bool operator==(const RandomForest&) const = default;

private:
    std::vector<DecisionTree> trees_;
    std::size_t n_classes_ = 0;
    std::size_t n_features_ = 0;
};

/// Forest on the raw dB patterns of the training split, 7-way.
RandomForest rf_train(const LabeledDataset& ds, const ForestConfig& cfg, unsigned threads = 1);

// ---- k-means ----------------------------------------------------------------

struct KMeansConfig {
    std::size_t k = 7;
    std::size_t max_iter = 300;
    std::uint64_t seed = 0;

    void validate() const;
};

struct KMeansModel {
    Matrix centroids;                    // k x d
    std::vector<std::size_t> label_map;  // cluster -> class index
    std::vector<double> inertia_history; // one entry per Lloyd iteration
    std::size_t iterations = 0;
    bool converged = false;

    std::size_t nearest(std::span<const double> x) const;
    std::size_t predict(std::span<const double> x) const { return label_map.at(nearest(x)); }
};

class ClusterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// k-means++ seeding, Lloyd iterations until the assignment is a fixpoint or
/// max_iter. Empty clusters are re-seeded with the point farthest from its
/// centroid. Clusters map to their majority label (lowest index on ties;
/// clusters without members take the overall majority).
KMeansModel kmeans_fit(const Matrix& x, std::span<const std::size_t> labels, std::size_t n_classes,
                       const KMeansConfig& cfg);

/// Sum of squared distances to the nearest centroid.
double kmeans_inertia(const Matrix& x, const Matrix& centroids);

// ---- point features ---------------------------------------------------------

enum class PointFeatureKind { SingleFrequencyDb, LowFrequencyDb };

std::string_view point_feature_name(PointFeatureKind k);
PointFeatureKind parse_point_feature(std::string_view s);

inline constexpr double kDesignatedFrequencyHz = 8e9;

struct PointFeature {
    PointFeatureKind kind = PointFeatureKind::SingleFrequencyDb;
    double frequency_hz = 0.0;  // requested frequency
    std::size_t bin = 0;        // nearest grid bin
    double value = 0.0;         // dB
};

class FrequencyOutOfGrid : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Bin used for a feature; LowFrequencyDb ignores `f_hz` and uses the grid minimum.
std::size_t point_feature_bin(const FrequencyGrid& grid, PointFeatureKind kind, double f_hz = kDesignatedFrequencyHz);

PointFeature extract_point_feature(const SignalPattern& pattern, PointFeatureKind kind,
                                   double f_hz = kDesignatedFrequencyHz);

struct PointFeatureClassifier {
    PointFeatureKind kind = PointFeatureKind::SingleFrequencyDb;
    double frequency_hz = kDesignatedFrequencyHz;
    std::size_t bin = 0;
    RandomForest forest;

    std::size_t input_dim() const { return 1; }
    std::size_t predict(std::span<const double> raw_db) const;
};

PointFeatureClassifier train_point_baseline(const LabeledDataset& ds, PointFeatureKind kind, const ForestConfig& cfg,
                                            unsigned threads = 1, double f_hz = kDesignatedFrequencyHz);

// ---- multiclass network -----------------------------------------------------

struct MulticlassModel {
    MulticlassClassifier classifier;
    Scaler scaler;
    GridPtr grid;

    std::size_t predict(std::span<const double> raw_db) const;
    std::size_t param_count() const { return classifier.network().param_count(); }
};

struct MulticlassTraining {
    MulticlassModel model;
    TrainLog log;
};

/// Softmax classifier over the 7 classes on standardized patterns.
MulticlassTraining train_multiclass_model(const LabeledDataset& ds, const NetworkSpec& spec, const TrainConfig& cfg);

// ---- bundles ----------------------------------------------------------------

void save_multiclass_bundle(const MulticlassModel& m, const std::filesystem::path& dir);
MulticlassModel load_multiclass_bundle(const std::filesystem::path& dir);
void save_forest_bundle(const RandomForest& f, const ForestConfig& cfg, const GridPtr& grid,
                        const std::filesystem::path& dir);
RandomForest load_forest_bundle(const std::filesystem::path& dir, GridPtr* grid = nullptr);
void save_kmeans_bundle(const KMeansModel& m, const Scaler& scaler, const GridPtr& grid,
                        const std::filesystem::path& dir);
KMeansModel load_kmeans_bundle(const std::filesystem::path& dir, Scaler* scaler = nullptr, GridPtr* grid = nullptr);
void save_point_bundle(const PointFeatureClassifier& c, const GridPtr& grid, const std::filesystem::path& dir);
PointFeatureClassifier load_point_bundle(const std::filesystem::path& dir, GridPtr* grid = nullptr);

}  // namespace sreldiag
