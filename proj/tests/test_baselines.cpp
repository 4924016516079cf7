// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include <doctest.h>

#include <filesystem>
#include <random>

#include "sreldiag/baselines.hpp"

using namespace sreldiag;

namespace {

// Probability that two labels drawn with replacement differ.
double gini_pairwise(const std::vector<std::size_t>& labels) {
    const double n = static_cast<double>(labels.size());
    double differ = 0.0;
    for (auto a : labels)
        for (auto b : labels) differ += a != b;
    return differ / (n * n);
}

struct Blobs {
    Matrix x;
    std::vector<std::size_t> labels;
};

Blobs blobs(std::size_t per, std::size_t dims, double sep, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01;
    Blobs b{Matrix(3 * per, dims), {}};
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < per; ++i) {
            auto row = b.x.row(c * per + i);
            for (std::size_t d = 0; d < dims; ++d) row[d] = n01(rng) + (d == c % dims ? sep * (c + 1) : 0.0);
            b.labels.push_back(c);
        }
    return b;
}

const LabeledDataset& small_dataset() {
    static const LabeledDataset ds = [] {
        auto grid = std::make_shared<const FrequencyGrid>(FrequencyGrid::linear(10e6, 14e9, 51));
        return split_dataset(synthesize_dataset(grid, {20, 15, 15, 15, 15, 15, 15}, SynthesisConfig{}, 8),
                             SplitRatios{}, 9);
    }();
    return ds;
}

}  // namespace

TEST_CASE("gini impurity") {
    const std::size_t node[] = {3, 1};
    CHECK(gini(node) == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(gini(node) == doctest::Approx(gini_pairwise({1, 1, 1, 0})));
    const std::size_t pure[] = {0, 5, 0};
    CHECK(gini(pure) == 0.0);
    const std::size_t empty[] = {0, 0};
    CHECK(gini(empty) == 0.0);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 50; ++t) {
        std::vector<std::size_t> counts(4, 0), labels;
        for (int i = 0; i < 20; ++i) {
            const std::size_t l = rng() % 4;
            ++counts[l];
            labels.push_back(l);
        }
        CHECK(gini(counts) == doctest::Approx(gini_pairwise(labels)).epsilon(1e-12));
    }
}

TEST_CASE("random forest") {
    SUBCASE("single-feature separable toy set") {
        Matrix x(40, 1);
        std::vector<std::size_t> y(40);
        for (std::size_t i = 0; i < 40; ++i) {
            x(i, 0) = static_cast<double>(i);
            y[i] = i < 17 ? 0 : 1;
        }
        ForestConfig cfg;
        cfg.n_trees = 10;
        cfg.seed = 3;
        const auto f = RandomForest::train(x, y, 2, cfg, 1);
        for (std::size_t i = 0; i < 40; ++i) CHECK(f.predict(x.row(i)) == y[i]);

        cfg.bootstrap = false;
        cfg.n_trees = 1;
        const auto t = RandomForest::train(x, y, 2, cfg, 1);
        REQUIRE(t.trees()[0].nodes().size() == 3);
        CHECK(t.trees()[0].nodes()[0].threshold == 16.5);
    }

    const auto b = blobs(30, 6, 3.0, 4);
    ForestConfig cfg;
    cfg.n_trees = 25;
    cfg.seed = 11;
    const auto f1 = RandomForest::train(b.x, b.labels, 3, cfg, 1);

    SUBCASE("deterministic and thread-independent") {
        const auto f2 = RandomForest::train(b.x, b.labels, 3, cfg, 1);
        const auto f3 = RandomForest::train(b.x, b.labels, 3, cfg, 3);
        CHECK(f1 == f2);
        CHECK(f1 == f3);
        std::mt19937_64 rng(2);
        std::normal_distribution<double> n(0.0, 5.0);
        for (int t = 0; t < 100; ++t) {
            std::vector<double> v(6);
            for (double& e : v) e = n(rng);
            CHECK(f1.predict(v) == f2.predict(v));
        }
        cfg.seed = 12;
        CHECK_FALSE(RandomForest::train(b.x, b.labels, 3, cfg, 1) == f1);
    }

    SUBCASE("depth and split limits") {
        Matrix noise(200, 4);
        std::vector<std::size_t> y(200);
        std::mt19937_64 rng(5);
        std::normal_distribution<double> n;
        for (std::size_t i = 0; i < 200; ++i) {
            for (std::size_t j = 0; j < 4; ++j) noise(i, j) = n(rng);
            y[i] = rng() % 5;
        }
        for (std::size_t depth : {1u, 3u, 5u})
            for (std::size_t min_split : {2u, 10u, 40u}) {
                ForestConfig c;
                c.n_trees = 5;
                c.max_depth = depth;
                c.min_samples_split = min_split;
                const auto f = RandomForest::train(noise, y, 5, c, 1);
                for (const auto& t : f.trees()) {
                    CHECK(t.depth() <= depth);
                    for (const auto& nd : t.nodes())
                        if (nd.feature >= 0) {
                            CHECK(nd.samples >= min_split);
                            CHECK(nd.depth < depth);
                        }
                }
            }
    }

    CHECK_THROWS_AS(f1.predict(std::vector<double>(5)), InvalidArgument);
    ForestConfig bad;
    bad.max_depth = 0;
    CHECK_THROWS_AS(RandomForest::train(b.x, b.labels, 3, bad, 1), InvalidArgument);
}

TEST_CASE("k-means") {
    SUBCASE("k equals the sample count") {
        const auto b = blobs(4, 3, 5.0, 6);
        KMeansConfig cfg;
        cfg.k = b.x.rows;
        const auto m = kmeans_fit(b.x, b.labels, 3, cfg);
        CHECK(m.inertia_history.back() == 0.0);
        CHECK(kmeans_inertia(b.x, m.centroids) == 0.0);
        for (std::size_t i = 0; i < b.x.rows; ++i) CHECK(m.predict(b.x.row(i)) == b.labels[i]);
    }

    SUBCASE("inertia is non-increasing") {
        std::mt19937_64 rng(7);
        std::normal_distribution<double> n;
        for (std::uint64_t t = 0; t < 100; ++t) {
            const std::size_t rows = 20 + rng() % 60, dims = 1 + rng() % 5;
            Matrix x(rows, dims);
            for (double& v : x.data) v = n(rng) * (1.0 + static_cast<double>(rng() % 3));
            std::vector<std::size_t> labels(rows, 0);
            KMeansConfig cfg;
            cfg.k = 2 + t % 7;
            cfg.seed = t;
            const auto m = kmeans_fit(x, labels, 1, cfg);
            for (std::size_t i = 1; i < m.inertia_history.size(); ++i)
                CHECK(m.inertia_history[i] <= m.inertia_history[i - 1] * (1.0 + 1e-12));
            CHECK(m.iterations <= 300);
            CHECK(m.converged);
        }
    }

    SUBCASE("well-separated blobs") {
        const auto b = blobs(50, 3, 10.0, 8);
        KMeansConfig cfg;
        cfg.k = 3;
        cfg.seed = 1;
        const auto m = kmeans_fit(b.x, b.labels, 3, cfg);
        for (std::size_t i = 0; i < b.x.rows; ++i) CHECK(m.predict(b.x.row(i)) == b.labels[i]);
        const auto again = kmeans_fit(b.x, b.labels, 3, cfg);
        CHECK(again.centroids == m.centroids);
    }

    SUBCASE("errors and duplicates") {
        Matrix x(3, 2, 1.0);
        const std::vector<std::size_t> labels{0, 1, 1};
        KMeansConfig cfg;
        cfg.k = 4;
        CHECK_THROWS_AS(kmeans_fit(x, labels, 2, cfg), ClusterError);
        cfg.k = 2;
        const auto m = kmeans_fit(x, labels, 2, cfg);
        CHECK(m.label_map.size() == 2);
        CHECK(m.inertia_history.back() == 0.0);
    }
}

TEST_CASE("point features") {
    const auto grid = std::make_shared<const FrequencyGrid>(FrequencyGrid::standard());
    const SignalPattern flat{grid, std::vector<double>(201, -10.0)};
    for (auto kind : {PointFeatureKind::SingleFrequencyDb, PointFeatureKind::LowFrequencyDb})
        CHECK(extract_point_feature(flat, kind).value == -10.0);

    // Brute-force nearest bin.
    std::size_t best = 0;
    for (std::size_t i = 0; i < grid->size(); ++i)
        if (std::abs((*grid)[i] - 8e9) < std::abs((*grid)[best] - 8e9)) best = i;
    CHECK(point_feature_bin(*grid, PointFeatureKind::SingleFrequencyDb) == best);
    CHECK(extract_point_feature(flat, PointFeatureKind::LowFrequencyDb).bin == 0);
    CHECK_THROWS_AS(extract_point_feature(flat, PointFeatureKind::SingleFrequencyDb, 20e9), FrequencyOutOfGrid);

    std::vector<double> ramp(201);
    for (std::size_t i = 0; i < 201; ++i) ramp[i] = -static_cast<double>(i);
    const auto p = extract_point_feature({grid, ramp}, PointFeatureKind::SingleFrequencyDb);
    CHECK(p.value == -static_cast<double>(best));
    const SignalPattern again{grid, std::vector<double>(201, p.value)};
    CHECK(extract_point_feature(again, PointFeatureKind::SingleFrequencyDb).value == p.value);

    CHECK(parse_point_feature(point_feature_name(PointFeatureKind::LowFrequencyDb)) == PointFeatureKind::LowFrequencyDb);
}

TEST_CASE("trained baselines on synthetic patterns") {
    const auto& ds = small_dataset();
    ForestConfig fc;
    fc.n_trees = 30;
    fc.seed = 2;
    const auto rf = rf_train(ds, fc, 1);
    const auto point = train_point_baseline(ds, PointFeatureKind::SingleFrequencyDb, fc, 1);
    CHECK(point.input_dim() == 1);
    CHECK(point.forest.n_features() == 1);

    TrainConfig tc;
    tc.lr = 3e-3;
    tc.batch = 32;
    tc.max_epochs = 80;
    tc.patience = 10;
    tc.seed = 5;
    const auto mc = train_multiclass_model(ds, NetworkSpec::mlp(51, {16}, 7), tc);
    CHECK(mc.model.param_count() == param_count(NetworkSpec::mlp(51, {16}, 7)));

    std::size_t rf_ok = 0, mc_ok = 0, n = 0;
    for (auto i : ds.indices(Split::Train)) {
        const auto& s = ds[i];
        rf_ok += rf.predict(s.pattern.magnitude_db) == s.label.class_index();
        mc_ok += mc.model.predict(s.pattern.magnitude_db) == s.label.class_index();
        ++n;
    }
    CHECK(static_cast<double>(rf_ok) / static_cast<double>(n) > 0.8);
    CHECK(static_cast<double>(mc_ok) / static_cast<double>(n) > 0.5);

    SUBCASE("bundles round trip") {
        const auto dir = std::filesystem::temp_directory_path() / "sreldiag_baseline_bundles";
        std::filesystem::remove_all(dir);
        save_forest_bundle(rf, fc, ds.grid(), dir / "rf");
        GridPtr g;
        CHECK(load_forest_bundle(dir / "rf", &g) == rf);
        CHECK(*g == *ds.grid());

        save_point_bundle(point, ds.grid(), dir / "point");
        const auto pb = load_point_bundle(dir / "point");
        CHECK(pb.bin == point.bin);
        CHECK(pb.forest == point.forest);

        save_multiclass_bundle(mc.model, dir / "mc");
        const auto mb = load_multiclass_bundle(dir / "mc");
        CHECK(mb.classifier.network() == mc.model.classifier.network());
        CHECK(mb.scaler == mc.model.scaler);

        const auto sc = fit_scaler(ds);
        const auto tr = ds.indices(Split::Train);
        std::vector<std::size_t> labels;
        for (auto i : tr) labels.push_back(ds[i].label.class_index());
        KMeansConfig kc;
        kc.seed = 4;
        const auto km = kmeans_fit(standardized_matrix(ds, sc, tr), labels, kNumClasses, kc);
        CHECK(km.centroids.rows == 7);
        CHECK(km.iterations <= 300);
        save_kmeans_bundle(km, sc, ds.grid(), dir / "km");
        Scaler sb;
        const auto kb = load_kmeans_bundle(dir / "km", &sb);
        CHECK(kb.centroids == km.centroids);
        CHECK(kb.label_map == km.label_map);
        CHECK(sb == sc);

        CHECK_THROWS(load_forest_bundle(dir / "km"));
        std::filesystem::remove_all(dir);
    }
}
