// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include "sreldiag/baselines.hpp"
#include "sreldiag/json_io.hpp"

namespace sreldiag {

namespace {

Json forest_to_json(const RandomForest& f) {
    Json trees = Json::array();
    for (const auto& t : f.trees()) {
        Json feature = Json::array(), threshold = Json::array(), left = Json::array(), right = Json::array(),
             label = Json::array(), samples = Json::array(), depth = Json::array();
        for (const auto& n : t.nodes()) {
            feature.push_back(n.feature);
            threshold.push_back(n.threshold);
            left.push_back(n.left);
            right.push_back(n.right);
            label.push_back(n.label);
            samples.push_back(n.samples);
            depth.push_back(n.depth);
        }
        trees.push_back({{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right},
                         {"label", label}, {"samples", samples}, {"depth", depth}});
    }
    return {{"n_classes", f.n_classes()}, {"n_features", f.n_features()}, {"trees", trees}};
}

RandomForest forest_from_json(const Json& j) {
    try {
        std::vector<DecisionTree> trees;
        for (const auto& t : j.at("trees")) {
            const auto feature = t.at("feature").get<std::vector<int>>();
            const auto threshold = t.at("threshold").get<std::vector<double>>();
            const auto left = t.at("left").get<std::vector<int>>();
            const auto right = t.at("right").get<std::vector<int>>();
            const auto label = t.at("label").get<std::vector<std::size_t>>();
            const auto samples = t.at("samples").get<std::vector<std::size_t>>();
            const auto depth = t.at("depth").get<std::vector<std::size_t>>();
            const std::size_t n = feature.size();
            if (threshold.size() != n || left.size() != n || right.size() != n || label.size() != n ||
                samples.size() != n || depth.size() != n)
                throw BundleError("tree arrays have different lengths");
            std::vector<TreeNode> nodes(n);
            for (std::size_t i = 0; i < n; ++i)
                nodes[i] = {feature[i], threshold[i], left[i], right[i], label[i], samples[i], depth[i]};
            trees.emplace_back(std::move(nodes));
        }
        return RandomForest(std::move(trees), j.at("n_classes").get<std::size_t>(),
                            j.at("n_features").get<std::size_t>());
    } catch (const Json::exception& e) {
        throw BundleError(std::string("bad forest record: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw BundleError(std::string("bad forest record: ") + e.what());
    }
}

Json forest_config_json(const ForestConfig& c) {
    return {{"n_trees", c.n_trees},     {"max_depth", c.max_depth}, {"min_samples_split", c.min_samples_split},
            {"max_features", c.max_features}, {"bootstrap", c.bootstrap}, {"seed", c.seed}};
}

template <typename Fn>
auto bundle_field(Fn&& fn) {
    try {
        return fn();
    } catch (const Json::exception& e) {
        throw BundleError(std::string("bad bundle manifest: ") + e.what());
    }
}

}  // namespace

void save_multiclass_bundle(const MulticlassModel& m, const std::filesystem::path& dir) {
    if (!m.grid) throw BundleError("multiclass model has no grid");
    std::filesystem::create_directories(dir);
    save_network(m.classifier.network(), dir / "network.bin");
    Json body;
    body["grid"] = grid_to_json(*m.grid);
    body["scaler"] = scaler_to_json(m.scaler);
    body["param_count"] = m.param_count();
    body["network"] = "network.bin";
    write_bundle_manifest(dir, "multiclass", body);
}

MulticlassModel load_multiclass_bundle(const std::filesystem::path& dir) {
    const Json j = read_bundle_manifest(dir, "multiclass");
    auto grid = grid_from_json(j.at("grid"));
    auto scaler = scaler_from_json(j.at("scaler"));
    const auto file = bundle_field([&] { return j.at("network").get<std::string>(); });
    try {
        MulticlassModel m{MulticlassClassifier(load_network(dir / file)), std::move(scaler), std::move(grid)};
        if (m.classifier.network().spec().input_dim != m.scaler.size())
            throw BundleError("network input width does not match the scaler");
        return m;
    } catch (const ModelFormatError& e) {
        throw BundleError(e.what());
    } catch (const InvalidArgument& e) {
        throw BundleError(e.what());
    }
}

void save_forest_bundle(const RandomForest& f, const ForestConfig& cfg, const GridPtr& grid,
                        const std::filesystem::path& dir) {
    if (!grid) throw BundleError("forest bundle needs a grid");
    std::filesystem::create_directories(dir);
    write_json_file(dir / "forest.json", forest_to_json(f));
    Json body;
    body["grid"] = grid_to_json(*grid);
    body["config"] = forest_config_json(cfg);
    body["node_count"] = f.node_count();
    body["forest"] = "forest.json";
    write_bundle_manifest(dir, "rf", body);
}

RandomForest load_forest_bundle(const std::filesystem::path& dir, GridPtr* grid) {
    const Json j = read_bundle_manifest(dir, "rf");
    if (grid) *grid = grid_from_json(j.at("grid"));
    const auto file = bundle_field([&] { return j.at("forest").get<std::string>(); });
    return forest_from_json(read_json_file(dir / file));
}

void save_kmeans_bundle(const KMeansModel& m, const Scaler& scaler, const GridPtr& grid,
                        const std::filesystem::path& dir) {
    if (!grid) throw BundleError("k-means bundle needs a grid");
    Json centroids = Json::array();
    for (std::size_t c = 0; c < m.centroids.rows; ++c)
        centroids.push_back(std::vector<double>(m.centroids.row(c).begin(), m.centroids.row(c).end()));
    Json body;
    body["grid"] = grid_to_json(*grid);
    body["scaler"] = scaler_to_json(scaler);
    body["k"] = m.centroids.rows;
    body["iterations"] = m.iterations;
    body["converged"] = m.converged;
    body["inertia_history"] = m.inertia_history;
    Json labels = Json::array();
    for (auto l : m.label_map) labels.push_back(DefectLabel::from_class_index(l).code());
    body["label_map"] = labels;
    body["centroids"] = centroids;
    write_bundle_manifest(dir, "kmeans", body);
}

KMeansModel load_kmeans_bundle(const std::filesystem::path& dir, Scaler* scaler, GridPtr* grid) {
    const Json j = read_bundle_manifest(dir, "kmeans");
    if (grid) *grid = grid_from_json(j.at("grid"));
    if (scaler) *scaler = scaler_from_json(j.at("scaler"));
    return bundle_field([&] {
        KMeansModel m;
        const auto rows = j.at("centroids").get<std::vector<std::vector<double>>>();
        if (rows.empty()) throw BundleError("k-means bundle has no centroids");
        m.centroids = Matrix(rows.size(), rows.front().size());
        for (std::size_t c = 0; c < rows.size(); ++c) {
            if (rows[c].size() != m.centroids.cols) throw BundleError("centroid widths differ");
            std::copy(rows[c].begin(), rows[c].end(), m.centroids.row(c).begin());
        }
        try {
            for (const auto& code : j.at("label_map")) m.label_map.push_back(DefectLabel::from_code(code.get<std::string>()).class_index());
        } catch (const InvalidArgument& e) {
            throw BundleError(std::string("bad label map: ") + e.what());
        }
        if (m.label_map.size() != m.centroids.rows) throw BundleError("label map size does not match k");
        m.inertia_history = j.at("inertia_history").get<std::vector<double>>();
        m.iterations = j.at("iterations").get<std::size_t>();
        m.converged = j.at("converged").get<bool>();
        return m;
    });
}

void save_point_bundle(const PointFeatureClassifier& c, const GridPtr& grid, const std::filesystem::path& dir) {
    if (!grid) throw BundleError("point-feature bundle needs a grid");
    std::filesystem::create_directories(dir);
    write_json_file(dir / "forest.json", forest_to_json(c.forest));
    Json body;
    body["grid"] = grid_to_json(*grid);
    body["feature"] = std::string(point_feature_name(c.kind));
    body["frequency_hz"] = c.frequency_hz;
    body["bin"] = c.bin;
    body["forest"] = "forest.json";
    write_bundle_manifest(dir, "point-rf", body);
}

PointFeatureClassifier load_point_bundle(const std::filesystem::path& dir, GridPtr* grid) {
    const Json j = read_bundle_manifest(dir, "point-rf");
    if (grid) *grid = grid_from_json(j.at("grid"));
    PointFeatureClassifier c = bundle_field([&] {
        PointFeatureClassifier p;
        try {
            p.kind = parse_point_feature(j.at("feature").get<std::string>());
        } catch (const InvalidArgument& e) {
            throw BundleError(e.what());
        }
        p.frequency_hz = j.at("frequency_hz").get<double>();
        p.bin = j.at("bin").get<std::size_t>();
        return p;
    });
    const auto file = bundle_field([&] { return j.at("forest").get<std::string>(); });
    c.forest = forest_from_json(read_json_file(dir / file));
    if (c.forest.n_features() != 1) throw BundleError("point-feature forest must have one input");
    return c;
}

}  // namespace sreldiag
