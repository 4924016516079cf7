// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#pragma once

// Evaluation metrics, inference benchmarking, exact t-SNE and the
// additive-noise sweep.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sreldiag/dataset.hpp"

namespace sreldiag {

// ---- metrics ----------------------------------------------------------------

class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::size_t n_classes = kNumClasses);

    void add(std::size_t truth, std::size_t predicted);
    std::size_t at(std::size_t truth, std::size_t predicted) const { return counts_[truth * n_ + predicted]; }
    std::size_t n_classes() const { return n_; }
    std::size_t total() const;
    std::size_t correct() const;
    std::size_t row_sum(std::size_t truth) const;
    std::size_t col_sum(std::size_t predicted) const;
    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::size_t n_;
    std::vector<std::size_t> counts_;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
    bool absent = false;  // neither in truth nor in predictions
};

struct EvalReport {
    std::string model_id;
    double accuracy = 0.0;       // fraction correct (headline)
    double mean_recall = 0.0;    // mean per-class TP/(TP+FN) over present classes
    double macro_f1 = 0.0;       // over all classes, 0/0 -> 0
    double cause_accuracy = 0.0; // predicted cause equals true cause
    std::vector<ClassMetrics> per_class;
    ConfusionMatrix confusion;
    std::size_t param_count = 0;
    double inference_ms = 0.0;   // mean per sample, 0 when not measured
};

/// Metrics from paired class indices.
EvalReport make_report(const std::string& model_id, std::span<const std::size_t> truth,
                       std::span<const std::size_t> predicted, std::size_t n_classes = kNumClasses);

/// A trained model seen as a function of a raw dB pattern.
struct ModelUnderTest {
    std::string id;
    std::function<std::size_t(std::span<const double>)> predict;
    std::size_t param_count = 0;
};

/// Predicts every sample of `split`; throws if the split is empty.
EvalReport evaluate(const ModelUnderTest& model, const LabeledDataset& ds, Split split = Split::Test);

/// Human-readable report (key: value lines plus the confusion matrix).
void write_report_text(const EvalReport& r, std::ostream& out);
/// Flat table: model,class,precision,recall,f1,support,absent.
void write_report_csv(const std::vector<EvalReport>& reports, std::ostream& out);
/// Flat table: model,true,predicted,count.
void write_confusion_csv(const std::vector<EvalReport>& reports, std::ostream& out);

// ---- benchmark --------------------------------------------------------------

struct BenchmarkResult {
    std::string model_id;
    double mean_ms_per_sample = 0.0;
    std::size_t param_count = 0;
    std::size_t repetitions = 0;
    std::size_t samples = 0;
};

/// Mean wall-clock time per prediction; `warmup` passes are discarded.
BenchmarkResult benchmark_inference(const ModelUnderTest& model, const std::vector<std::vector<double>>& patterns,
                                    std::size_t repetitions = 100, std::size_t warmup = 5);

// ---- t-SNE ------------------------------------------------------------------

struct TsneConfig {
    double perplexity = 30.0;
    std::size_t iterations = 1000;
    double learning_rate = 200.0;
    double momentum_initial = 0.5;
    double momentum_final = 0.8;
    std::size_t momentum_switch = 250;
    double exaggeration = 12.0;
    std::size_t exaggeration_iters = 250;
    std::uint64_t seed = 0;
};

class PerplexityInfeasible : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

struct TsneResult {
    Matrix embedding;  // n x 2
    double initial_kl = 0.0;
    double final_kl = 0.0;
};

/// Joint affinities P (n x n): per-point Gaussian bandwidths matched to the
/// perplexity by binary search (entropy tolerance 1e-5), symmetrized and
/// normalized to sum 1.
Matrix tsne_affinities(const Matrix& x, double perplexity);

/// KL(P || Q) for the Student-t affinities Q of embedding y.
double tsne_kl(const Matrix& p, const Matrix& y);

/// Exact t-SNE; requires 5 <= perplexity <= (n - 1) / 3.
TsneResult tsne_embed(const Matrix& x, const TsneConfig& cfg);

/// Mean silhouette coefficient (Euclidean) of labelled points.
double silhouette_score(const Matrix& y, std::span<const std::size_t> labels);

/// Embedding CSV: id,cause,severity,x,y.
void write_embedding_csv(const LabeledDataset& ds, std::span<const std::size_t> indices, const Matrix& embedding,
                         std::ostream& out);

// ---- noise sweep ------------------------------------------------------------

struct NoiseSweepConfig {
    std::vector<double> levels{0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    unsigned threads = 1;
};

struct SweepCell {
    std::string model;
    double level = 0.0;
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
};

struct SweepSummary {
    std::string model;
    double level = 0.0;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;  // sample std, 0 for one seed
    double mean_macro_f1 = 0.0;
    std::size_t seeds = 0;
};

struct NoiseSweepReport {
    std::vector<double> levels;
    std::vector<std::string> models;
    std::vector<SweepCell> cells;        // model-major, then level, then seed
    std::vector<SweepSummary> summary;   // model-major, then level

    const SweepSummary& at(const std::string& model, double level) const;
};

/// Sample i under noise seed s receives N(0, sigma^2) dB noise drawn from
/// derive_seed(s, i), shared by every model and scaled per level. Test split only.
NoiseSweepReport noise_sweep(std::span<const ModelUnderTest> models, const LabeledDataset& ds,
                             const NoiseSweepConfig& cfg);

/// Flat tables: model,level,seed,accuracy,macro_f1 and model,level,mean,std,mean_f1,seeds.
void write_sweep_cells_csv(const NoiseSweepReport& r, std::ostream& out);
void write_sweep_summary_csv(const NoiseSweepReport& r, std::ostream& out);

}  // namespace sreldiag
