// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include <numeric>
#include <ostream>

#include "sreldiag/analysis.hpp"

namespace sreldiag {

ConfusionMatrix::ConfusionMatrix(std::size_t n_classes) : n_(n_classes), counts_(n_classes * n_classes, 0) {
    if (n_classes == 0) throw InvalidArgument("confusion matrix needs at least one class");
}

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted) {
    if (truth >= n_ || predicted >= n_) throw InvalidArgument("class index out of range");
    ++counts_[truth * n_ + predicted];
}

std::size_t ConfusionMatrix::total() const { return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0}); }

std::size_t ConfusionMatrix::correct() const {
    std::size_t s = 0;
    for (std::size_t i = 0; i < n_; ++i) s += at(i, i);
    return s;
}

std::size_t ConfusionMatrix::row_sum(std::size_t truth) const {
    std::size_t s = 0;
    for (std::size_t j = 0; j < n_; ++j) s += at(truth, j);
    return s;
}

std::size_t ConfusionMatrix::col_sum(std::size_t predicted) const {
    std::size_t s = 0;
    for (std::size_t i = 0; i < n_; ++i) s += at(i, predicted);
    return s;
}

namespace {

double ratio(std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); }

}  // namespace

EvalReport make_report(const std::string& model_id, std::span<const std::size_t> truth,
                       std::span<const std::size_t> predicted, std::size_t n_classes) {
    if (truth.size() != predicted.size()) throw InvalidArgument("truth and prediction lengths differ");
    if (truth.empty()) throw InvalidArgument("nothing to evaluate");
    EvalReport r;
    r.model_id = model_id;
    r.confusion = ConfusionMatrix(n_classes);
    std::size_t cause_hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        r.confusion.add(truth[i], predicted[i]);
        if (n_classes == kNumClasses && cause_of_class(truth[i]) == cause_of_class(predicted[i])) ++cause_hits;
    }
    r.accuracy = ratio(r.confusion.correct(), r.confusion.total());
    r.cause_accuracy = n_classes == kNumClasses ? ratio(cause_hits, truth.size()) : r.accuracy;

    double f1_sum = 0.0, recall_sum = 0.0;
    std::size_t present = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        ClassMetrics m;
        const std::size_t tp = r.confusion.at(c, c);
        m.support = r.confusion.row_sum(c);
        const std::size_t predicted_c = r.confusion.col_sum(c);
        m.precision = ratio(tp, predicted_c);
        m.recall = ratio(tp, m.support);
        m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
        m.absent = m.support == 0 && predicted_c == 0;
        f1_sum += m.f1;
        if (m.support > 0) {
            recall_sum += m.recall;
            ++present;
        }
        r.per_class.push_back(m);
    }
    r.macro_f1 = f1_sum / static_cast<double>(n_classes);
    r.mean_recall = present > 0 ? recall_sum / static_cast<double>(present) : 0.0;
    return r;
}

EvalReport evaluate(const ModelUnderTest& model, const LabeledDataset& ds, Split split) {
    const auto idx = ds.indices(split);
    if (idx.empty()) throw InvalidArgument("evaluate: the " + std::string(split_name(split)) + " split is empty");
    std::vector<std::size_t> truth, pred;
    for (auto i : idx) {
        truth.push_back(ds[i].label.class_index());
        pred.push_back(model.predict(ds[i].pattern.magnitude_db));
    }
    auto r = make_report(model.id, truth, pred);
    r.param_count = model.param_count;
    return r;
}

namespace {

std::string class_name(std::size_t c, std::size_t n) {
    return n == kNumClasses ? DefectLabel::from_class_index(c).code() : std::to_string(c);
}

}  // namespace

void write_report_text(const EvalReport& r, std::ostream& out) {
    const std::size_t n = r.confusion.n_classes();
    out << "model: " << r.model_id << '\n'
        << "accuracy: " << format_double(r.accuracy) << '\n'
        << "mean_recall: " << format_double(r.mean_recall) << '\n'
        << "macro_f1: " << format_double(r.macro_f1) << '\n'
        << "cause_accuracy: " << format_double(r.cause_accuracy) << '\n'
        << "param_count: " << r.param_count << '\n'
        << "samples: " << r.confusion.total() << '\n';
    out << "per_class:\n";
    for (std::size_t c = 0; c < n; ++c) {
        const auto& m = r.per_class[c];
        out << "  " << class_name(c, n) << ": precision=" << format_double(m.precision)
            << " recall=" << format_double(m.recall) << " f1=" << format_double(m.f1) << " support=" << m.support
            << (m.absent ? " absent" : "") << '\n';
    }
    out << "confusion (rows=true, cols=predicted):\n      ";
    for (std::size_t c = 0; c < n; ++c) out << ' ' << class_name(c, n);
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        out << "  " << class_name(i, n);
        for (std::size_t j = 0; j < n; ++j) out << ' ' << r.confusion.at(i, j);
        out << '\n';
    }
}

void write_report_csv(const std::vector<EvalReport>& reports, std::ostream& out) {
    out << "model,class,precision,recall,f1,support,absent\n";
    for (const auto& r : reports) {
        const std::size_t n = r.confusion.n_classes();
        for (std::size_t c = 0; c < n; ++c) {
            const auto& m = r.per_class[c];
            out << r.model_id << ',' << class_name(c, n) << ',' << format_double(m.precision) << ','
                << format_double(m.recall) << ',' << format_double(m.f1) << ',' << m.support << ','
                << (m.absent ? 1 : 0) << '\n';
        }
    }
}

void write_confusion_csv(const std::vector<EvalReport>& reports, std::ostream& out) {
    out << "model,true,predicted,count\n";
    for (const auto& r : reports) {
        const std::size_t n = r.confusion.n_classes();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out << r.model_id << ',' << class_name(i, n) << ',' << class_name(j, n) << ',' << r.confusion.at(i, j)
                    << '\n';
    }
}

}  // namespace sreldiag
