// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include "sreldiag/config.hpp"

#include <cmath>
#include <set>

namespace sreldiag {

namespace {

constexpr std::array<std::string_view, 5> kMethodNames{"srel", "multiclass", "rf", "kmeans", "point-rf"};

// Reads fields of one JSON object; leftover keys are an error.
class ObjectReader {
public:
    ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError("config: '" + path_ + "' must be an object");
    }

    template <typename T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const Json::exception&) {
            throw ConfigError("config: '" + path_ + "." + key + "' has the wrong type");
        }
    }

    const Json* child(const char* key) {
        seen_.insert(key);
        return j_.contains(key) ? &j_.at(key) : nullptr;
    }

    std::string path(const char* key) const { return path_ + "." + key; }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError("config: unknown key '" + path_ + "." + it.key() + "'");
    }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <typename Fn>
void with_object(ObjectReader& parent, const char* key, Fn&& fn) {
    if (const Json* j = parent.child(key)) {
        ObjectReader r(*j, parent.path(key));
        fn(r);
        r.finish();
    }
}

}  // namespace

std::string_view method_name(Method m) { return kMethodNames.at(static_cast<std::size_t>(m)); }

Method parse_method(std::string_view s) {
    for (std::size_t i = 0; i < kMethodNames.size(); ++i)
        if (kMethodNames[i] == s) return static_cast<Method>(i);
    throw ConfigError("unknown method '" + std::string(s) + "' (expected srel, multiclass, rf, kmeans or point-rf)");
}

GridPtr GridConfig::make() const {
    return std::make_shared<const FrequencyGrid>(FrequencyGrid::linear(f_min_hz, f_max_hz, points));
}

NetworkSpec NetworkConfig::spec(std::size_t input_dim) const {
    switch (backbone) {
        case Backbone::Logistic: return NetworkSpec::logistic(input_dim);
        case Backbone::Mlp: return NetworkSpec::mlp(input_dim, hidden);
        case Backbone::Cnn1d: return NetworkSpec::cnn1d(input_dim, cnn_layers);
    }
    throw InvalidArgument("unknown backbone");
}

void RunConfig::validate() const {
    auto check = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError("config: " + msg);
    };
    try {
        (void)grid.make();
        synthesis.validate();
        train.validate();
        forest.validate();
        kmeans.validate();
        network.spec(grid.points).validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    for (std::size_t c = 0; c < kNumClasses; ++c)
        check(counts[c] >= 5, "class " + DefectLabel::from_class_index(c).code() + " needs at least 5 samples, got " +
                                  std::to_string(counts[c]));
    check(split.train > 0.0 && split.val >= 0.0 && split.test > 0.0, "split ratios must be positive");
    check(std::abs(split.train + split.val + split.test - 1.0) < 1e-9, "split ratios must sum to 1");
    check(!methods.empty(), "at least one method is required");
    check(!noise.levels.empty() && !noise.seeds.empty(), "noise sweep needs levels and seeds");
    for (double l : noise.levels) check(l >= 0.0, "noise levels must be >= 0");
    check(tsne.perplexity >= 5.0, "t-SNE perplexity must be >= 5");
    check(tsne.iterations >= 1, "t-SNE needs at least one iteration");
    check(point_frequency_hz > 0.0, "point-feature frequency must be > 0");
    check(!benchmark || benchmark_repetitions >= 100, "benchmark needs at least 100 repetitions");
}

Json config_to_json(const RunConfig& c) {
    Json j;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["grid"] = {{"f_min_hz", c.grid.f_min_hz}, {"f_max_hz", c.grid.f_max_hz}, {"points", c.grid.points}};
    Json counts;
    for (std::size_t k = 0; k < kNumClasses; ++k) counts[DefectLabel::from_class_index(k).code()] = c.counts[k];
    j["class_counts"] = counts;
    j["split"] = {{"train", c.split.train}, {"val", c.split.val}, {"test", c.split.test}};
    const auto& s = c.synthesis;
    j["synthesis"] = {{"line",
                       {{"r", s.nominal.r},
                        {"l", s.nominal.l},
                        {"g", s.nominal.g},
                        {"c", s.nominal.c},
                        {"length", s.nominal.length},
                        {"skin_coeff", s.nominal.skin_coeff}}},
                      {"segments", s.segments},
                      {"crack_resistance", s.crack_resistance},
                      {"crack_capacitance", s.crack_capacitance},
                      {"corrosion_kappa", s.corrosion_kappa},
                      {"variation_sigma", s.variation_sigma},
                      {"reference_impedance", s.reference_impedance}};
    j["network"] = {{"backbone", std::string(backbone_name(c.network.backbone))},
                    {"hidden", c.network.hidden},
                    {"cnn_layers", c.network.cnn_layers}};
    j["train"] = {{"lr", c.train.lr},
                  {"batch", c.train.batch},
                  {"max_epochs", c.train.max_epochs},
                  {"patience", c.train.patience},
                  {"shuffle", c.train.shuffle}};
    j["forest"] = {{"n_trees", c.forest.n_trees},
                   {"max_depth", c.forest.max_depth},
                   {"min_samples_split", c.forest.min_samples_split},
                   {"max_features", c.forest.max_features},
                   {"bootstrap", c.forest.bootstrap}};
    j["kmeans"] = {{"k", c.kmeans.k}, {"max_iter", c.kmeans.max_iter}};
    j["point_feature"] = {{"kind", std::string(point_feature_name(c.point_feature))},
                          {"frequency_hz", c.point_frequency_hz}};
    j["noise"] = {{"levels", c.noise.levels}, {"seeds", c.noise.seeds}};
    j["tsne"] = {{"perplexity", c.tsne.perplexity},
                 {"iterations", c.tsne.iterations},
                 {"learning_rate", c.tsne.learning_rate},
                 {"momentum_initial", c.tsne.momentum_initial},
                 {"momentum_final", c.tsne.momentum_final},
                 {"momentum_switch", c.tsne.momentum_switch},
                 {"exaggeration", c.tsne.exaggeration},
                 {"exaggeration_iters", c.tsne.exaggeration_iters}};
    Json methods = Json::array();
    for (auto m : c.methods) methods.push_back(std::string(method_name(m)));
    j["methods"] = methods;
    j["benchmark"] = {{"enabled", c.benchmark}, {"repetitions", c.benchmark_repetitions}};
    return j;
}

RunConfig config_from_json(const Json& j) {
    RunConfig c;
    ObjectReader root(j, "$");
    root.get("seed", c.seed);
    root.get("threads", c.threads);
    with_object(root, "grid", [&](ObjectReader& r) {
        r.get("f_min_hz", c.grid.f_min_hz);
        r.get("f_max_hz", c.grid.f_max_hz);
        r.get("points", c.grid.points);
    });
    with_object(root, "class_counts", [&](ObjectReader& r) {
        for (std::size_t k = 0; k < kNumClasses; ++k) r.get(DefectLabel::from_class_index(k).code().c_str(), c.counts[k]);
    });
    with_object(root, "split", [&](ObjectReader& r) {
        r.get("train", c.split.train);
        r.get("val", c.split.val);
        r.get("test", c.split.test);
    });
    with_object(root, "synthesis", [&](ObjectReader& r) {
        auto& s = c.synthesis;
        with_object(r, "line", [&](ObjectReader& l) {
            l.get("r", s.nominal.r);
            l.get("l", s.nominal.l);
            l.get("g", s.nominal.g);
            l.get("c", s.nominal.c);
            l.get("length", s.nominal.length);
            l.get("skin_coeff", s.nominal.skin_coeff);
        });
        r.get("segments", s.segments);
        r.get("crack_resistance", s.crack_resistance);
        r.get("crack_capacitance", s.crack_capacitance);
        r.get("corrosion_kappa", s.corrosion_kappa);
        r.get("variation_sigma", s.variation_sigma);
        r.get("reference_impedance", s.reference_impedance);
    });
    with_object(root, "network", [&](ObjectReader& r) {
        std::string backbone(backbone_name(c.network.backbone));
        r.get("backbone", backbone);
        try {
            c.network.backbone = parse_backbone(backbone);
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        r.get("hidden", c.network.hidden);
        r.get("cnn_layers", c.network.cnn_layers);
    });
    with_object(root, "train", [&](ObjectReader& r) {
        r.get("lr", c.train.lr);
        r.get("batch", c.train.batch);
        r.get("max_epochs", c.train.max_epochs);
        r.get("patience", c.train.patience);
        r.get("shuffle", c.train.shuffle);
    });
    with_object(root, "forest", [&](ObjectReader& r) {
        r.get("n_trees", c.forest.n_trees);
        r.get("max_depth", c.forest.max_depth);
        r.get("min_samples_split", c.forest.min_samples_split);
        r.get("max_features", c.forest.max_features);
        r.get("bootstrap", c.forest.bootstrap);
    });
    with_object(root, "kmeans", [&](ObjectReader& r) {
        r.get("k", c.kmeans.k);
        r.get("max_iter", c.kmeans.max_iter);
    });
    with_object(root, "point_feature", [&](ObjectReader& r) {
        std::string kind(point_feature_name(c.point_feature));
        r.get("kind", kind);
        try {
            c.point_feature = parse_point_feature(kind);
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        r.get("frequency_hz", c.point_frequency_hz);
    });
    with_object(root, "noise", [&](ObjectReader& r) {
        r.get("levels", c.noise.levels);
        r.get("seeds", c.noise.seeds);
    });
    with_object(root, "tsne", [&](ObjectReader& r) {
        r.get("perplexity", c.tsne.perplexity);
        r.get("iterations", c.tsne.iterations);
        r.get("learning_rate", c.tsne.learning_rate);
        r.get("momentum_initial", c.tsne.momentum_initial);
        r.get("momentum_final", c.tsne.momentum_final);
        r.get("momentum_switch", c.tsne.momentum_switch);
        r.get("exaggeration", c.tsne.exaggeration);
        r.get("exaggeration_iters", c.tsne.exaggeration_iters);
    });
    std::vector<std::string> methods;
    root.get("methods", methods);
    if (j.contains("methods")) {
        c.methods.clear();
        for (const auto& m : methods) c.methods.push_back(parse_method(m));
    }
    with_object(root, "benchmark", [&](ObjectReader& r) {
        r.get("enabled", c.benchmark);
        r.get("repetitions", c.benchmark_repetitions);
    });
    root.finish();
    c.noise.threads = c.threads;
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    Json j;
    try {
        j = read_json_file(path);
    } catch (const std::runtime_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return config_from_json(j);
}

std::uint64_t config_hash(const RunConfig& c) {
    const std::string text = config_to_json(c).dump();
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace sreldiag
