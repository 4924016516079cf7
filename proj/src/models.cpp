// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include "sreldiag/experiment.hpp"

#include <spdlog/spdlog.h>

namespace sreldiag {

namespace {

Json log_json(const TrainLog& log) {
    return {{"epochs", log.epochs_run()},
            {"best_epoch", log.best_epoch},
            {"best_val_loss", log.best_val_loss},
            {"train_loss", log.train_loss},
            {"val_loss", log.val_loss}};
}

}  // namespace

std::size_t TrainedModel::param_count() const {
    switch (method) {
        case Method::Srel: return srel->param_count();
        case Method::Multiclass: return multiclass->param_count();
        case Method::Rf: return forest->node_count();
        case Method::Kmeans: return kmeans->centroids.data.size();
        case Method::PointRf: return point->forest.node_count();
    }
    return 0;
}

std::size_t TrainedModel::predict(std::span<const double> raw_db) const {
    switch (method) {
        case Method::Srel: return diagnose(*srel, raw_db).label().class_index();
        case Method::Multiclass: return multiclass->predict(raw_db);
        case Method::Rf: return forest->predict(raw_db);
        case Method::Kmeans: return kmeans->predict(kmeans_scaler.apply(raw_db));
        case Method::PointRf: return point->predict(raw_db);
    }
    throw InvalidArgument("unknown method");
}

ModelUnderTest TrainedModel::under_test() const {
    auto self = std::make_shared<const TrainedModel>(*this);
    return {id(), [self](std::span<const double> x) { return self->predict(x); }, param_count()};
}

LabeledDataset make_dataset(const RunConfig& cfg) {
    cfg.validate();
    const auto ds = synthesize_dataset(cfg.grid.make(), cfg.counts, cfg.synthesis, cfg.synth_seed(), cfg.threads);
    return split_dataset(ds, cfg.split, cfg.split_seed());
}

TrainedModel train_method(Method method, const LabeledDataset& ds, const RunConfig& cfg) {
    TrainedModel m;
    m.method = method;
    m.grid = ds.grid();
    const std::uint64_t seed = cfg.method_seed(method);
    const NetworkSpec spec = cfg.network.spec(ds.grid()->size());
    TrainConfig tc = cfg.train;
    tc.seed = seed;
    switch (method) {
        case Method::Srel: {
            auto t = train_srel(ds, spec, tc, cfg.threads);
            Json logs = Json::array();
            for (const auto& l : t.logs) {
                Json e = log_json(l.log);
                e["cause"] = std::string(cause_name(l.cause));
                e["level"] = l.level;
                e["positives"] = l.positives;
                e["negatives"] = l.negatives;
                logs.push_back(e);
            }
            m.training_log = {{"scorers", logs}};
            m.srel = std::make_shared<const SrelModel>(std::move(t.model));
            break;
        }
        case Method::Multiclass: {
            auto t = train_multiclass_model(ds, spec, tc);
            m.training_log = {{"network", log_json(t.log)}};
            m.multiclass = std::make_shared<const MulticlassModel>(std::move(t.model));
            break;
        }
        case Method::Rf: {
            m.forest_config = cfg.forest;
            m.forest_config.seed = seed;
            m.forest = std::make_shared<const RandomForest>(rf_train(ds, m.forest_config, cfg.threads));
            m.training_log = {{"trees", m.forest->trees().size()}, {"nodes", m.forest->node_count()}};
            break;
        }
        case Method::Kmeans: {
            m.kmeans_scaler = ds.scaler() ? *ds.scaler() : fit_scaler(ds);
            const auto idx = ds.indices(Split::Train);
            const Matrix x = standardized_matrix(ds, m.kmeans_scaler, idx);
            std::vector<std::size_t> labels;
            for (auto i : idx) labels.push_back(ds[i].label.class_index());
            KMeansConfig kc = cfg.kmeans;
            kc.seed = seed;
            m.kmeans = std::make_shared<const KMeansModel>(kmeans_fit(x, labels, kNumClasses, kc));
            m.training_log = {{"iterations", m.kmeans->iterations},
                              {"converged", m.kmeans->converged},
                              {"inertia", m.kmeans->inertia_history}};
            break;
        }
        case Method::PointRf: {
            ForestConfig fc = cfg.forest;
            fc.seed = seed;
            m.forest_config = fc;
            m.point = std::make_shared<const PointFeatureClassifier>(
                train_point_baseline(ds, cfg.point_feature, fc, cfg.threads, cfg.point_frequency_hz));
            m.training_log = {{"feature", std::string(point_feature_name(m.point->kind))},
                              {"frequency_hz", m.point->frequency_hz},
                              {"bin", m.point->bin}};
            break;
        }
    }
    spdlog::info("trained {} ({} parameters)", m.id(), m.param_count());
    return m;
}

void save_model(const TrainedModel& m, const std::filesystem::path& dir) {
    switch (m.method) {
        case Method::Srel: save_srel_bundle(*m.srel, dir); break;
        case Method::Multiclass: save_multiclass_bundle(*m.multiclass, dir); break;
        case Method::Rf: save_forest_bundle(*m.forest, m.forest_config, m.grid, dir); break;
        case Method::Kmeans: save_kmeans_bundle(*m.kmeans, m.kmeans_scaler, m.grid, dir); break;
        case Method::PointRf: save_point_bundle(*m.point, m.grid, dir); break;
    }
    if (!m.training_log.is_null()) write_json_file(dir / "training_log.json", m.training_log);
}

TrainedModel load_model(const std::filesystem::path& dir) {
    const Json manifest = read_bundle_manifest(dir);
    TrainedModel m;
    try {
        m.method = parse_method(manifest.value("method", std::string{}));
    } catch (const ConfigError& e) {
        throw BundleError(e.what());
    }
    switch (m.method) {
        case Method::Srel: {
            auto s = load_srel_bundle(dir);
            m.grid = s.grid;
            m.srel = std::make_shared<const SrelModel>(std::move(s));
            break;
        }
        case Method::Multiclass: {
            auto mc = load_multiclass_bundle(dir);
            m.grid = mc.grid;
            m.multiclass = std::make_shared<const MulticlassModel>(std::move(mc));
            break;
        }
        case Method::Rf: m.forest = std::make_shared<const RandomForest>(load_forest_bundle(dir, &m.grid)); break;
        case Method::Kmeans:
            m.kmeans = std::make_shared<const KMeansModel>(load_kmeans_bundle(dir, &m.kmeans_scaler, &m.grid));
            break;
        case Method::PointRf:
            m.point = std::make_shared<const PointFeatureClassifier>(load_point_bundle(dir, &m.grid));
            break;
    }
    if (std::filesystem::exists(dir / "training_log.json")) m.training_log = read_json_file(dir / "training_log.json");
    return m;
}

}  // namespace sreldiag
