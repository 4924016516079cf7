// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include "sreldiag/baselines.hpp"

namespace sreldiag {

std::string_view point_feature_name(PointFeatureKind k) {
    return k == PointFeatureKind::SingleFrequencyDb ? "single-frequency-db" : "low-frequency-db";
}

PointFeatureKind parse_point_feature(std::string_view s) {
    if (s == "single-frequency-db") return PointFeatureKind::SingleFrequencyDb;
    if (s == "low-frequency-db") return PointFeatureKind::LowFrequencyDb;
    throw InvalidArgument("unknown point feature '" + std::string(s) + "'");
}

std::size_t point_feature_bin(const FrequencyGrid& grid, PointFeatureKind kind, double f_hz) {
    if (kind == PointFeatureKind::LowFrequencyDb) return 0;
    if (!(f_hz >= grid.front() && f_hz <= grid.back()))
        throw FrequencyOutOfGrid("frequency " + format_double(f_hz) + " Hz is outside the grid [" +
                                 format_double(grid.front()) + ", " + format_double(grid.back()) + "] Hz");
    return grid.nearest_index(f_hz);
}

PointFeature extract_point_feature(const SignalPattern& pattern, PointFeatureKind kind, double f_hz) {
    if (!pattern.grid) throw InvalidArgument("pattern has no grid");
    PointFeature p;
    p.kind = kind;
    p.bin = point_feature_bin(*pattern.grid, kind, f_hz);
    p.frequency_hz = kind == PointFeatureKind::LowFrequencyDb ? pattern.grid->front() : f_hz;
    p.value = pattern.magnitude_db.at(p.bin);
    return p;
}

std::size_t PointFeatureClassifier::predict(std::span<const double> raw_db) const {
    if (bin >= raw_db.size()) throw InvalidArgument("pattern is shorter than the feature bin");
    const double v = raw_db[bin];
    return forest.predict(std::span<const double>(&v, 1));
}

PointFeatureClassifier train_point_baseline(const LabeledDataset& ds, PointFeatureKind kind, const ForestConfig& cfg,
                                            unsigned threads, double f_hz) {
    const auto idx = ds.indices(Split::Train);
    if (idx.empty()) throw InvalidArgument("point baseline: training split is empty");
    PointFeatureClassifier c;
    c.kind = kind;
    c.bin = point_feature_bin(*ds.grid(), kind, f_hz);
    c.frequency_hz = kind == PointFeatureKind::LowFrequencyDb ? ds.grid()->front() : f_hz;
    Matrix x(idx.size(), 1);
    std::vector<std::size_t> labels(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        x(r, 0) = ds[idx[r]].pattern.magnitude_db[c.bin];
        labels[r] = ds[idx[r]].label.class_index();
    }
    c.forest = RandomForest::train(x, labels, kNumClasses, cfg, threads);
    return c;
}

}  // namespace sreldiag
