// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include "sreldiag/srel.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include <spdlog/spdlog.h>

namespace sreldiag {

std::size_t SrelModel::scorer_count() const {
    std::size_t n = normal_detector ? 1 : 0;
    for (const auto& l : ladders) n += l.scorers.size();
    return n;
}

std::size_t SrelModel::param_count() const {
    std::size_t n = normal_detector ? normal_detector->param_count() : 0;
    for (const auto& l : ladders)
        for (const auto& s : l.scorers) n += s->param_count();
    return n;
}

std::vector<Cause> SrelModel::causes() const {
    std::vector<Cause> out;
    for (const auto& l : ladders) out.push_back(l.cause);
    return out;
}

void SrelModel::validate() const {
    if (!normal_detector) throw InvalidArgument("SREL model has no normal detector");
    if (ladders.empty()) throw InvalidArgument("SREL model has no severity ladders");
    const std::size_t dim = normal_detector->input_dim();
    for (const auto& l : ladders) {
        if (l.cause == Cause::Normal) throw InvalidArgument("a severity ladder cannot target Normal");
        if (l.scorers.size() != static_cast<std::size_t>(kSeverityLevels))
            throw InvalidArgument("severity ladder must have " + std::to_string(kSeverityLevels) + " scorers");
        for (const auto& s : l.scorers) {
            if (!s) throw InvalidArgument("null scorer in severity ladder");
            if (s->input_dim() != dim) throw InvalidArgument("scorer input widths differ");
        }
    }
    if (scaler.size() != dim) throw InvalidArgument("scaler width does not match the scorers");
    if (grid && grid->size() != dim) throw InvalidArgument("grid length does not match the scorers");
}

int aggregate_severity(const std::vector<bool>& decisions) {
    return static_cast<int>(std::count(decisions.begin(), decisions.end(), true));
}

SrelOutput srel_output_vector(const SrelModel& model, std::span<const double> standardized) {
    if (standardized.size() != model.normal_detector->input_dim())
        throw InvalidArgument("pattern length " + std::to_string(standardized.size()) + " does not match model input " +
                              std::to_string(model.normal_detector->input_dim()));
    SrelOutput out;
    out.normal_logit = model.normal_detector->logit(standardized);
    out.vector.push_back(out.normal_logit > 0.0 ? 1 : 0);
    for (const auto& ladder : model.ladders) {
        std::vector<bool> fired;
        std::vector<double> logits;
        double sum = 0.0;
        for (const auto& s : ladder.scorers) {
            const double z = s->logit(standardized);
            logits.push_back(z);
            fired.push_back(z > 0.0);
            sum += sigmoid(z);
        }
        out.vector.push_back(aggregate_severity(fired));
        out.logistic_sums.push_back(sum);
        out.ladder_logits.push_back(std::move(logits));
    }
    return out;
}

Diagnosis decide(std::span<const int> output_vector, std::span<const double> logistic_sums,
                 std::span<const Cause> causes) {
    if (output_vector.size() != causes.size() + 1 || logistic_sums.size() != causes.size())
        throw InvalidArgument("output vector does not match the number of causes");
    Diagnosis d;
    d.output_vector.assign(output_vector.begin(), output_vector.end());
    d.logistic_sums.assign(logistic_sums.begin(), logistic_sums.end());

    const int best = *std::max_element(output_vector.begin() + 1, output_vector.end());
    if (best <= 0 || best < output_vector[0]) return d;

    std::size_t winner = causes.size();
    std::size_t tied = 0;
    for (std::size_t i = 0; i < causes.size(); ++i) {
        if (output_vector[i + 1] != best) continue;
        ++tied;
        if (winner == causes.size() || logistic_sums[i] > logistic_sums[winner]) winner = i;
    }
    d.cause = causes[winner];
    d.severity = best;
    d.tie_break_used = tied > 1;
    return d;
}

Diagnosis diagnose(const SrelModel& model, std::span<const double> raw_db) {
    const std::size_t n = model.normal_detector->input_dim();
    if (raw_db.size() != n)
        throw GridMismatch("pattern has " + std::to_string(raw_db.size()) + " points, expected N = " +
                           std::to_string(n));
    const auto x = model.scaler.apply(raw_db);
    const auto out = srel_output_vector(model, x);
    const auto causes = model.causes();
    return decide(out.vector, out.logistic_sums, causes);
}

Diagnosis diagnose(const SrelModel& model, const SignalPattern& pattern) {
    if (model.grid && pattern.grid && !model.grid->matches(pattern.grid->points()))
        throw GridMismatch("pattern grid (" + std::to_string(pattern.grid->size()) +
                           " points) does not match the model grid (expected N = " +
                           std::to_string(model.grid->size()) + ")");
    return diagnose(model, std::span<const double>(pattern.magnitude_db));
}

namespace {

struct Job {
    Cause cause;
    int level;
    BinarySubsets subsets;
};

std::string scorer_name(Cause cause, int level) {
    if (level == 0) return "normal detector";
    return "f(" + std::string(cause_name(cause)) + ", " + std::to_string(level) + ")";
}

}  // namespace

SrelTraining train_srel(const LabeledDataset& ds, const NetworkSpec& spec, const TrainConfig& cfg, unsigned threads) {
    const auto hist = ds.class_histogram(Split::Train);
    for (std::size_t c = 0; c < kNumClasses; ++c)
        if (hist[c] == 0)
            throw InvalidArgument("training split has no samples of class " + DefectLabel::from_class_index(c).code());
    if (spec.input_dim != ds.grid()->size()) throw InvalidArgument("network input width does not match the grid");

    const Scaler scaler = ds.scaler() ? *ds.scaler() : fit_scaler(ds);
    const auto train_idx = ds.indices(Split::Train);
    const auto val_idx = ds.indices(Split::Val);
    const Matrix x = standardized_matrix(ds, scaler, train_idx);
    const Matrix x_val = standardized_matrix(ds, scaler, val_idx);

    std::vector<Job> jobs;
    jobs.push_back({Cause::Normal, 0, build_normal_subsets(ds)});
    for (Cause c : kDefectCauses)
        for (int k = 1; k <= kSeverityLevels; ++k) jobs.push_back({c, k, build_srel_subsets(ds, c, k)});

    std::vector<std::optional<TrainResult>> results(jobs.size());
    parallel_for(jobs.size(), threads, [&](std::size_t j) {
        const Job& job = jobs[j];
        std::vector<double> targets(train_idx.size(), 0.0);
        for (std::size_t r = 0; r < train_idx.size(); ++r)
            targets[r] = std::binary_search(job.subsets.positives.begin(), job.subsets.positives.end(), train_idx[r])
                             ? 1.0
                             : 0.0;
        std::vector<double> val_targets(val_idx.size());
        for (std::size_t r = 0; r < val_idx.size(); ++r)
            val_targets[r] = binary_target(ds[val_idx[r]].label, job.cause, job.level, job.level == 0) ? 1.0 : 0.0;
        TrainConfig c = cfg;
        c.seed = derive_seed(cfg.seed, 100 + j);
        try {
            results[j] = train_binary(spec.with_output_dim(1), x, targets, x_val, val_targets, c);
        } catch (const std::exception& e) {
            throw SrelTrainingError("training " + scorer_name(job.cause, job.level) + " failed: " + e.what());
        }
    });

    SrelTraining out;
    out.model.scaler = scaler;
    out.model.grid = ds.grid();
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        auto scorer = std::make_shared<NetworkScorer>(std::move(results[j]->network));
        out.logs.push_back({jobs[j].cause, jobs[j].level, jobs[j].subsets.positives.size(),
                            jobs[j].subsets.negatives.size(), std::move(results[j]->log)});
        if (jobs[j].level == 0) {
            out.model.normal_detector = std::move(scorer);
            continue;
        }
        if (out.model.ladders.empty() || out.model.ladders.back().cause != jobs[j].cause)
            out.model.ladders.push_back({jobs[j].cause, {}});
        out.model.ladders.back().scorers.push_back(std::move(scorer));
    }
    for (const auto& l : out.logs)
        spdlog::info("srel {}: {} epochs (best {})", scorer_name(l.cause, l.level), l.log.epochs_run(),
                     l.log.best_epoch);
    return out;
}

}  // namespace sreldiag
