// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sreldiag/baselines.hpp"

namespace sreldiag {

void ForestConfig::validate() const {
    if (n_trees < 1) throw InvalidArgument("n_trees must be >= 1");
    if (max_depth < 1) throw InvalidArgument("max_depth must be >= 1");
    if (min_samples_split < 2) throw InvalidArgument("min_samples_split must be >= 2");
}

double gini(std::span<const std::size_t> counts) {
    const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
    if (n == 0.0) return 0.0;
    double s = 0.0;
    for (auto c : counts) {
        const double p = static_cast<double>(c) / n;
        s += p * p;
    }
    return 1.0 - s;
}

namespace {

std::size_t majority(std::span<const std::size_t> counts) {
    return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

struct Builder {
    const Matrix& x;
    std::span<const std::size_t> labels;
    std::size_t n_classes;
    const ForestConfig& cfg;
    Rng& rng;
    std::size_t n_features_try;
    std::vector<TreeNode> nodes;
    std::vector<std::size_t> features;

    int build(std::vector<std::size_t> rows, std::size_t depth) {
        std::vector<std::size_t> counts(n_classes, 0);
        for (auto r : rows) ++counts[labels[r]];
        const int id = static_cast<int>(nodes.size());
        nodes.push_back({});
        nodes[id].label = majority(counts);
        nodes[id].samples = rows.size();
        nodes[id].depth = depth;

        const double parent = gini(counts);
        if (depth >= cfg.max_depth || rows.size() < cfg.min_samples_split || parent == 0.0) return id;

        // Partial Fisher-Yates: the first n_features_try entries are the candidates.
        for (std::size_t i = 0; i < n_features_try; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, features.size() - 1);
            std::swap(features[i], features[pick(rng)]);
        }

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_impurity = parent;
        const double n = static_cast<double>(rows.size());
        std::vector<std::size_t> sorted = rows;
        std::vector<std::size_t> left(n_classes), right(n_classes);
        for (std::size_t fi = 0; fi < n_features_try; ++fi) {
            const std::size_t f = features[fi];
            std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                return x(a, f) < x(b, f) || (x(a, f) == x(b, f) && a < b);
            });
            std::fill(left.begin(), left.end(), 0);
            right = counts;
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                const std::size_t c = labels[sorted[i]];
                ++left[c];
                --right[c];
                const double lo = x(sorted[i], f);
                const double hi = x(sorted[i + 1], f);
                if (!(lo < hi)) continue;
                const double nl = static_cast<double>(i + 1);
                const double impurity = (nl * gini(left) + (n - nl) * gini(right)) / n;
                if (impurity < best_impurity) {
                    best_impurity = impurity;
                    best_feature = static_cast<int>(f);
                    best_threshold = lo + (hi - lo) / 2.0;
                    if (!(best_threshold < hi)) best_threshold = lo;
                }
            }
        }
        if (best_feature < 0) return id;

        std::vector<std::size_t> lrows, rrows;
        for (auto r : rows) (x(r, best_feature) <= best_threshold ? lrows : rrows).push_back(r);
        nodes[id].feature = best_feature;
        nodes[id].threshold = best_threshold;
        const int l = build(std::move(lrows), depth + 1);
        const int r = build(std::move(rrows), depth + 1);
        nodes[id].left = l;
        nodes[id].right = r;
        return id;
    }
};

}  // namespace

DecisionTree::DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw InvalidArgument("a tree needs at least one node");
    const int n = static_cast<int>(nodes_.size());
    for (const auto& nd : nodes_)
        if (nd.feature >= 0 && (nd.left <= 0 || nd.right <= 0 || nd.left >= n || nd.right >= n))
            throw InvalidArgument("tree node has invalid children");
}

DecisionTree DecisionTree::fit(const Matrix& x, std::span<const std::size_t> labels, std::size_t n_classes,
                               std::span<const std::size_t> rows, const ForestConfig& cfg, Rng& rng) {
    cfg.validate();
    if (rows.empty()) throw InvalidArgument("cannot fit a tree on zero rows");
    if (labels.size() != x.rows) throw InvalidArgument("label count does not match rows");
    for (auto l : labels)
        if (l >= n_classes) throw InvalidArgument("label out of range");
    std::size_t m = cfg.max_features;
    if (m == 0) m = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(x.cols)))));
    m = std::min(m, x.cols);
    Builder b{x, labels, n_classes, cfg, rng, m, {}, std::vector<std::size_t>(x.cols)};
    std::iota(b.features.begin(), b.features.end(), 0);
    b.build(std::vector<std::size_t>(rows.begin(), rows.end()), 0);
    return DecisionTree(std::move(b.nodes));
}

std::size_t DecisionTree::predict(std::span<const double> x) const {
    std::size_t i = 0;
    while (nodes_[i].feature >= 0)
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(nodes_[i].feature)] <= nodes_[i].threshold
                                         ? nodes_[i].left
                                         : nodes_[i].right);
    return nodes_[i].label;
}

std::size_t DecisionTree::depth() const {
    std::size_t d = 0;
    for (const auto& n : nodes_) d = std::max(d, n.depth);
    return d;
}

RandomForest::RandomForest(std::vector<DecisionTree> trees, std::size_t n_classes, std::size_t n_features)
    : trees_(std::move(trees)), n_classes_(n_classes), n_features_(n_features) {
    if (trees_.empty()) throw InvalidArgument("a forest needs at least one tree");
    if (n_classes_ == 0) throw InvalidArgument("a forest needs at least one class");
}

RandomForest RandomForest::train(const Matrix& x, std::span<const std::size_t> labels, std::size_t n_classes,
                                 const ForestConfig& cfg, unsigned threads) {
    cfg.validate();
    if (x.rows == 0) throw InvalidArgument("random forest training set is empty");
    std::vector<DecisionTree> trees(cfg.n_trees);
    parallel_for(cfg.n_trees, threads, [&](std::size_t t) {
        Rng rng(derive_seed(cfg.seed, t));
        std::vector<std::size_t> rows(x.rows);
        if (cfg.bootstrap) {
            std::uniform_int_distribution<std::size_t> pick(0, x.rows - 1);
            for (auto& r : rows) r = pick(rng);
        } else {
            std::iota(rows.begin(), rows.end(), 0);
        }
        trees[t] = DecisionTree::fit(x, labels, n_classes, rows, cfg, rng);
    });
    return RandomForest(std::move(trees), n_classes, x.cols);
}

std::vector<std::size_t> RandomForest::votes(std::span<const double> x) const {
    if (x.size() != n_features_)
        throw InvalidArgument("forest expects " + std::to_string(n_features_) + " features, got " +
                              std::to_string(x.size()));
    std::vector<std::size_t> v(n_classes_, 0);
    for (const auto& t : trees_) ++v[t.predict(x)];
    return v;
}

std::size_t RandomForest::predict(std::span<const double> x) const { return majority(votes(x)); }

std::size_t RandomForest::node_count() const {
    std::size_t n = 0;
    for (const auto& t : trees_) n += t.nodes().size();
    return n;
}

RandomForest rf_train(const LabeledDataset& ds, const ForestConfig& cfg, unsigned threads) {
    const auto idx = ds.indices(Split::Train);
    if (idx.empty()) throw InvalidArgument("random forest: training split is empty");
    Matrix x(idx.size(), ds.grid()->size());
    std::vector<std::size_t> labels(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const auto& v = ds[idx[r]].pattern.magnitude_db;
        std::copy(v.begin(), v.end(), x.row(r).begin());
        labels[r] = ds[idx[r]].label.class_index();
    }
    return RandomForest::train(x, labels, kNumClasses, cfg, threads);
}

}  // namespace sreldiag
