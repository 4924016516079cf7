// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include "sreldiag/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

namespace sreldiag {

std::string_view split_name(Split s) {
    switch (s) {
        case Split::Unassigned: return "none";
        case Split::Train: return "train";
        case Split::Val: return "val";
        case Split::Test: return "test";
    }
    return "?";
}

Split parse_split(std::string_view s) {
    if (s == "train") return Split::Train;
    if (s == "val") return Split::Val;
    if (s == "test") return Split::Test;
    if (s == "none") return Split::Unassigned;
    throw InvalidArgument("unknown split '" + std::string(s) + "'");
}

std::vector<double> Scaler::apply(std::span<const double> raw) const {
    std::vector<double> out(raw.begin(), raw.end());
    apply_inplace(out);
    return out;
}

void Scaler::apply_inplace(std::span<double> values) const {
    if (values.size() != mean.size())
        throw InvalidArgument("scaler expects " + std::to_string(mean.size()) + " values, got " +
                              std::to_string(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = (values[i] - mean[i]) / stddev[i];
}

void LabeledDataset::set_scaler(Scaler s) {
    if (!grid_ || s.mean.size() != grid_->size() || s.stddev.size() != grid_->size())
        throw InvalidArgument("scaler length does not match the grid");
    for (double sd : s.stddev)
        if (!(sd > 0.0)) throw InvalidArgument("scaler std must be > 0 in every bin");
    scaler_ = std::move(s);
}

void LabeledDataset::add(LabeledSample s) {
    if (!grid_) throw InvalidArgument("dataset has no grid");
    if (s.pattern.grid != grid_ && !(s.pattern.grid && *s.pattern.grid == *grid_))
        throw InvalidArgument("sample '" + s.id + "' is on a different grid");
    if (s.pattern.size() != grid_->size())
        throw InvalidArgument("sample '" + s.id + "' has wrong pattern length");
    s.label.validate();
    s.pattern.grid = grid_;
    samples_.push_back(std::move(s));
}

std::vector<std::size_t> LabeledDataset::indices(Split split) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < samples_.size(); ++i)
        if (samples_[i].split == split) out.push_back(i);
    return out;
}

std::array<std::size_t, kNumClasses> LabeledDataset::class_histogram(std::optional<Split> split) const {
    std::array<std::size_t, kNumClasses> h{};
    for (const auto& s : samples_)
        if (!split || s.split == *split) ++h[s.label.class_index()];
    return h;
}

void LabeledDataset::validate() const {
    if (!grid_) throw InvalidArgument("dataset has no grid");
    std::unordered_set<std::string> ids;
    for (const auto& s : samples_) {
        if (!ids.insert(s.id).second) throw InvalidArgument("duplicate sample id '" + s.id + "'");
        if (s.pattern.size() != grid_->size()) throw InvalidArgument("sample '" + s.id + "' has wrong length");
        for (double v : s.pattern.magnitude_db)
            if (!std::isfinite(v)) throw InvalidArgument("sample '" + s.id + "' has non-finite values");
        s.label.validate();
    }
    if (scaler_ && (scaler_->size() != grid_->size())) throw InvalidArgument("scaler length mismatch");
}

LabeledDataset split_dataset(const LabeledDataset& ds, const SplitRatios& ratios, std::uint64_t seed) {
    if (ratios.train < 0 || ratios.val < 0 || ratios.test < 0 ||
        std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9)
        throw InvalidArgument("split ratios must be nonnegative and sum to 1");

    std::array<std::vector<std::size_t>, kNumClasses> by_class;
    for (std::size_t i = 0; i < ds.size(); ++i) by_class[ds[i].label.class_index()].push_back(i);

    LabeledDataset out = ds;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        auto& idx = by_class[c];
        if (idx.empty()) continue;
        if (idx.size() < 5)
            throw ClassTooSmall("class " + DefectLabel::from_class_index(c).code() + " has " +
                                std::to_string(idx.size()) + " samples; at least 5 are required");
        Rng rng(derive_seed(seed, c));
        std::shuffle(idx.begin(), idx.end(), rng);
        const double n = static_cast<double>(idx.size());
        const auto n_train = static_cast<std::size_t>(std::floor(n * ratios.train + 1e-9));
        const auto n_val = static_cast<std::size_t>(std::floor(n * ratios.val + 1e-9));
        for (std::size_t k = 0; k < idx.size(); ++k) {
            Split s = k < n_train ? Split::Train : (k < n_train + n_val ? Split::Val : Split::Test);
            out.samples()[idx[k]].split = s;
        }
    }
    return out;
}

Scaler fit_scaler(const LabeledDataset& ds) {
    const auto train = ds.indices(Split::Train);
    if (train.empty()) throw InvalidArgument("fit_scaler: training split is empty");
    const std::size_t n = ds.grid()->size();
    Scaler s{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (auto i : train)
        for (std::size_t k = 0; k < n; ++k) s.mean[k] += ds[i].pattern.magnitude_db[k];
    for (double& m : s.mean) m /= static_cast<double>(train.size());
    for (auto i : train)
        for (std::size_t k = 0; k < n; ++k) {
            const double d = ds[i].pattern.magnitude_db[k] - s.mean[k];
            s.stddev[k] += d * d;
        }
    for (double& v : s.stddev) v = std::max(std::sqrt(v / static_cast<double>(train.size())), Scaler::kStdFloor);
    return s;
}

Matrix standardized_matrix(const LabeledDataset& ds, const Scaler& scaler, std::span<const std::size_t> indices) {
    Matrix m(indices.size(), ds.grid()->size());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const auto& v = ds[indices[r]].pattern.magnitude_db;
        auto row = m.row(r);
        std::copy(v.begin(), v.end(), row.begin());
        scaler.apply_inplace(row);
    }
    return m;
}

bool binary_target(const DefectLabel& label, Cause cause, int level, bool normal_detector) {
    if (normal_detector) return label.cause == Cause::Normal;
    return label.cause == cause && label.severity >= level;
}

BinarySubsets build_srel_subsets(const LabeledDataset& ds, Cause cause, int level) {
    if (cause == Cause::Normal) throw InvalidArgument("severity ladders exist only for defect causes");
    if (level < 1 || level > kSeverityLevels) throw InvalidArgument("target level must be 1..3");
    BinarySubsets out;
    out.target_cause = cause;
    out.target_level = level;
    for (auto i : ds.indices(Split::Train))
        (binary_target(ds[i].label, cause, level, false) ? out.positives : out.negatives).push_back(i);
    if (out.positives.empty())
        throw EmptySubset("no training positives for " + std::string(cause_name(cause)) + " level " +
                          std::to_string(level));
    return out;
}

BinarySubsets build_normal_subsets(const LabeledDataset& ds) {
    BinarySubsets out;
    out.normal_detector = true;
    for (auto i : ds.indices(Split::Train))
        (ds[i].label.cause == Cause::Normal ? out.positives : out.negatives).push_back(i);
    return out;
}

LabeledDataset synthesize_dataset(const GridPtr& grid, const ClassCounts& counts, const SynthesisConfig& config,
                                  std::uint64_t seed, unsigned threads) {
    config.validate();
    struct Job {
        DefectLabel label;
        std::size_t class_index;
        std::size_t ordinal;
    };
    std::vector<Job> jobs;
    for (std::size_t c = 0; c < kNumClasses; ++c)
        for (std::size_t j = 0; j < counts[c]; ++j) jobs.push_back({DefectLabel::from_class_index(c), c, j});

    std::vector<LabeledSample> samples(jobs.size());
    parallel_for(jobs.size(), threads, [&](std::size_t i) {
        const auto& job = jobs[i];
        const std::uint64_t sample_seed = derive_seed(derive_seed(seed, job.class_index), job.ordinal);
        const auto scenario = DefectScenario::sample(job.label, derive_seed(sample_seed, 0));
        char id[32];
        std::snprintf(id, sizeof(id), "%s-%04zu", job.label.code().c_str(), job.ordinal);
        samples[i] = LabeledSample{id, synthesize_pattern(scenario, grid, config, derive_seed(sample_seed, 1)),
                                   job.label, Split::Unassigned};
    });

    LabeledDataset ds(grid);
    for (auto& s : samples) ds.add(std::move(s));
    return ds;
}

}  // namespace sreldiag
