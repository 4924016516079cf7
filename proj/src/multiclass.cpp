// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include "sreldiag/baselines.hpp"

namespace sreldiag {

std::size_t MulticlassModel::predict(std::span<const double> raw_db) const {
    if (raw_db.size() != scaler.size())
        throw InvalidArgument("pattern has " + std::to_string(raw_db.size()) + " points, model expects " +
                              std::to_string(scaler.size()));
    return classifier.predict(scaler.apply(raw_db));
}

MulticlassTraining train_multiclass_model(const LabeledDataset& ds, const NetworkSpec& spec, const TrainConfig& cfg) {
    const Scaler scaler = ds.scaler() ? *ds.scaler() : fit_scaler(ds);
    const auto train_idx = ds.indices(Split::Train);
    const auto val_idx = ds.indices(Split::Val);
    const Matrix x = standardized_matrix(ds, scaler, train_idx);
    const Matrix x_val = standardized_matrix(ds, scaler, val_idx);
    std::vector<double> y, y_val;
    for (auto i : train_idx) y.push_back(static_cast<double>(ds[i].label.class_index()));
    for (auto i : val_idx) y_val.push_back(static_cast<double>(ds[i].label.class_index()));
    auto r = train_multiclass(spec.with_output_dim(kNumClasses), x, y, x_val, y_val, cfg);
    return {MulticlassModel{MulticlassClassifier(std::move(r.network)), scaler, ds.grid()}, std::move(r.log)};
}

}  // namespace sreldiag
