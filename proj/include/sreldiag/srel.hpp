// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#pragma once

// Severity rating ensemble: one normal-state detector plus, per defect
// cause, a ladder of threshold scorers f_{i,k} answering "severity >= k?".
// A ladder's severity is the number of its scorers with a positive logit;
// the diagnosis takes the largest entry of (r_0, r_M, r_C), breaking ties
// between causes by the summed logistic outputs of each ladder.

#include <filesystem>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sreldiag/dataset.hpp"
#include "sreldiag/nn.hpp"

namespace sreldiag {

struct SeverityLadder {
    Cause cause = Cause::Mechanical;
    std::vector<std::shared_ptr<const BinaryScorer>> scorers;  // ascending level
};

struct SrelModel {
    std::shared_ptr<const BinaryScorer> normal_detector;
    std::vector<SeverityLadder> ladders;
    Scaler scaler;
    GridPtr grid;

    std::size_t scorer_count() const;
    std::size_t param_count() const;
    std::vector<Cause> causes() const;
    void validate() const;
};

/// Number of true decisions (order-independent).
int aggregate_severity(const std::vector<bool>& decisions);

struct SrelOutput {
    std::vector<int> vector;             // r_0, then one entry per ladder
    std::vector<double> logistic_sums;   // per ladder, sum over all its scorers
    std::vector<std::vector<double>> ladder_logits;
    double normal_logit = 0.0;
};

SrelOutput srel_output_vector(const SrelModel& model, std::span<const double> standardized);

struct Diagnosis {
    Cause cause = Cause::Normal;
    int severity = 0;
    std::vector<int> output_vector;
    bool tie_break_used = false;
    std::vector<double> logistic_sums;

    DefectLabel label() const { return {cause, severity}; }
    std::string class_code() const { return label().code(); }
};

/// Severity = largest entry; a defect entry wins ties against r_0; equal
/// defect entries go to the larger logistic sum (then the earlier cause).
/// When r_0 wins the result is Normal with severity 0.
Diagnosis decide(std::span<const int> output_vector, std::span<const double> logistic_sums,
                 std::span<const Cause> causes = kDefectCauses);

class GridMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Standardizes with the model's scaler, scores and decides.
Diagnosis diagnose(const SrelModel& model, std::span<const double> raw_db);
/// Also checks the pattern's grid against the model grid.
Diagnosis diagnose(const SrelModel& model, const SignalPattern& pattern);

struct ScorerLog {
    Cause cause = Cause::Normal;
    int level = 0;  // 0 for the normal detector
    std::size_t positives = 0;
    std::size_t negatives = 0;
    TrainLog log;
};

struct SrelTraining {
    SrelModel model;
    std::vector<ScorerLog> logs;  // normal detector first, then ladders in order
};

class SrelTrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Trains the normal detector and f_{i,k} for i in {Mechanical, Corrosion},
/// k in 1..3, each with its own seed derived from cfg.seed. Scorers are
/// independent; `threads` only changes wall time, never the result.
SrelTraining train_srel(const LabeledDataset& ds, const NetworkSpec& spec, const TrainConfig& cfg,
                        unsigned threads = 1);

/// Bundle directory: manifest.json plus one network file per scorer.
void save_srel_bundle(const SrelModel& model, const std::filesystem::path& dir);
SrelModel load_srel_bundle(const std::filesystem::path& dir);

}  // namespace sreldiag
