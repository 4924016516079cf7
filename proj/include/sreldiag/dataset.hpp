// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sreldiag/common.hpp"
#include "sreldiag/label.hpp"
#include "sreldiag/rfsim.hpp"

namespace sreldiag {

enum class Split { Unassigned, Train, Val, Test };

std::string_view split_name(Split s);
Split parse_split(std::string_view s);

struct LabeledSample {
    std::string id;
    SignalPattern pattern;
    DefectLabel label;
    Split split = Split::Unassigned;
};

/// Per-frequency z-score statistics fitted on the training split.
struct Scaler {
    std::vector<double> mean;
    std::vector<double> stddev;

    static constexpr double kStdFloor = 1e-8;

    std::size_t size() const { return mean.size(); }
    std::vector<double> apply(std::span<const double> raw) const;
    void apply_inplace(std::span<double> values) const;
    bool operator==(const Scaler&) const = default;
};

class LabeledDataset {
public:
    LabeledDataset() = default;
    explicit LabeledDataset(GridPtr grid) : grid_(std::move(grid)) {}

    const GridPtr& grid() const { return grid_; }
    std::vector<LabeledSample>& samples() { return samples_; }
    const std::vector<LabeledSample>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    const LabeledSample& operator[](std::size_t i) const { return samples_[i]; }

    const std::optional<Scaler>& scaler() const { return scaler_; }
    void set_scaler(Scaler s);

    /// Appends a sample; its pattern must share this dataset's grid.
    void add(LabeledSample s);

    /// Indices of samples in `split`, in dataset order.
    std::vector<std::size_t> indices(Split split) const;

    /// Counts per class index (Normal, M1..M3, C1..C3), optionally for one split.
    std::array<std::size_t, kNumClasses> class_histogram(std::optional<Split> split = std::nullopt) const;

    /// Checks grid sharing, id uniqueness, finite values and scaler shape.
    void validate() const;

private:
    GridPtr grid_;
    std::vector<LabeledSample> samples_;
    std::optional<Scaler> scaler_;
};

struct SplitRatios {
    double train = 0.6;
    double val = 0.2;
    double test = 0.2;
};

class ClassTooSmall : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Stratified split: per class floor(n*train) / floor(n*val) / remainder.
/// Deterministic in (dataset, seed). Every class needs at least 5 samples.
LabeledDataset split_dataset(const LabeledDataset& ds, const SplitRatios& ratios, std::uint64_t seed);

/// Fits on training samples only; std floored at 1e-8.
Scaler fit_scaler(const LabeledDataset& ds);

/// Standardized feature matrix for the given sample indices.
Matrix standardized_matrix(const LabeledDataset& ds, const Scaler& scaler, std::span<const std::size_t> indices);

/// Positive/negative partition of the training split for one baseline network.
struct BinarySubsets {
    std::vector<std::size_t> positives;
    std::vector<std::size_t> negatives;
    Cause target_cause = Cause::Normal;
    int target_level = 0;
    bool normal_detector = false;
};

class EmptySubset : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Target rule of a baseline network: (cause == i && severity >= k) or,
/// for the normal detector, cause == Normal.
bool binary_target(const DefectLabel& label, Cause cause, int level, bool normal_detector);

BinarySubsets build_srel_subsets(const LabeledDataset& ds, Cause cause, int level);
BinarySubsets build_normal_subsets(const LabeledDataset& ds);

/// Per-class sample counts in class-index order.
using ClassCounts = std::array<std::size_t, kNumClasses>;
inline constexpr ClassCounts kPaperClassCounts{175, 90, 80, 100, 90, 95, 160};

/// Synthesizes `counts` samples per class (ids like "C3-0007"). Each sample
/// draws its scenario and variation from seeds derived from `seed`.
LabeledDataset synthesize_dataset(const GridPtr& grid, const ClassCounts& counts,
                                  const SynthesisConfig& config, std::uint64_t seed,
                                  unsigned threads = 1);

class DatasetFormatError : public std::runtime_error {
public:
    DatasetFormatError(std::size_t row, const std::string& what)
        : std::runtime_error("dataset row " + std::to_string(row) + ": " + what), row_(row) {}
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

/// CSV layout: header "id,cause,severity,split,f_0..f_{N-1}", a "#grid" row
/// with frequencies in Hz, then one row per sample of dB magnitudes.
void write_dataset_csv(const LabeledDataset& ds, std::ostream& out);
void write_dataset_csv(const LabeledDataset& ds, const std::filesystem::path& path);
LabeledDataset read_dataset_csv(std::istream& in);
LabeledDataset read_dataset_csv(const std::filesystem::path& path);

}  // namespace sreldiag
