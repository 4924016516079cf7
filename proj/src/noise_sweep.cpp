// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include <algorithm>
#include <cmath>
#include <ostream>

#include "sreldiag/analysis.hpp"

namespace sreldiag {

const SweepSummary& NoiseSweepReport::at(const std::string& model, double level) const {
    for (const auto& s : summary)
        if (s.model == model && s.level == level) return s;
    throw InvalidArgument("no sweep cell for model '" + model + "' at level " + format_double(level));
}

NoiseSweepReport noise_sweep(std::span<const ModelUnderTest> models, const LabeledDataset& ds,
                             const NoiseSweepConfig& cfg) {
    if (models.empty()) throw InvalidArgument("noise sweep needs at least one model");
    if (cfg.levels.empty() || cfg.seeds.empty()) throw InvalidArgument("noise sweep needs levels and seeds");
    for (double l : cfg.levels)
        if (!(l >= 0.0)) throw InvalidArgument("noise levels must be >= 0");
    const auto idx = ds.indices(Split::Test);
    if (idx.empty()) throw InvalidArgument("noise sweep: the test split is empty");

    NoiseSweepReport r;
    r.levels = cfg.levels;
    std::sort(r.levels.begin(), r.levels.end());
    for (const auto& m : models) r.models.push_back(m.id);

    std::vector<std::size_t> truth;
    for (auto i : idx) truth.push_back(ds[i].label.class_index());

    const std::size_t nl = r.levels.size(), ns = cfg.seeds.size();
    r.cells.resize(models.size() * nl * ns);
    parallel_for(r.cells.size(), cfg.threads, [&](std::size_t c) {
        const std::size_t m = c / (nl * ns), l = (c / ns) % nl, s = c % ns;
        std::vector<std::size_t> pred(idx.size());
        std::vector<double> noisy;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const auto& clean = ds[idx[k]].pattern.magnitude_db;
            noisy.assign(clean.begin(), clean.end());
            add_gaussian_noise(noisy, r.levels[l], derive_seed(cfg.seeds[s], k));
            pred[k] = models[m].predict(noisy);
        }
        const auto rep = make_report(models[m].id, truth, pred);
        r.cells[c] = {models[m].id, r.levels[l], cfg.seeds[s], rep.accuracy, rep.macro_f1};
    });

    for (std::size_t m = 0; m < models.size(); ++m)
        for (std::size_t l = 0; l < nl; ++l) {
            SweepSummary s;
            s.model = models[m].id;
            s.level = r.levels[l];
            s.seeds = ns;
            const auto* first = &r.cells[(m * nl + l) * ns];
            for (std::size_t k = 0; k < ns; ++k) {
                s.mean_accuracy += first[k].accuracy;
                s.mean_macro_f1 += first[k].macro_f1;
            }
            s.mean_accuracy /= static_cast<double>(ns);
            s.mean_macro_f1 /= static_cast<double>(ns);
            if (ns > 1) {
                double var = 0.0;
                for (std::size_t k = 0; k < ns; ++k) var += std::pow(first[k].accuracy - s.mean_accuracy, 2);
                s.std_accuracy = std::sqrt(var / static_cast<double>(ns - 1));
            }
            r.summary.push_back(s);
        }
    return r;
}

void write_sweep_cells_csv(const NoiseSweepReport& r, std::ostream& out) {
    out << "model,level_db,seed,accuracy,macro_f1\n";
    for (const auto& c : r.cells)
        out << c.model << ',' << format_double(c.level) << ',' << c.seed << ',' << format_double(c.accuracy) << ','
            << format_double(c.macro_f1) << '\n';
}

void write_sweep_summary_csv(const NoiseSweepReport& r, std::ostream& out) {
    out << "model,level_db,mean_accuracy,std_accuracy,mean_macro_f1,seeds\n";
    for (const auto& s : r.summary)
        out << s.model << ',' << format_double(s.level) << ',' << format_double(s.mean_accuracy) << ','
            << format_double(s.std_accuracy) << ',' << format_double(s.mean_macro_f1) << ',' << s.seeds << '\n';
}

}  // namespace sreldiag
