// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include "sreldiag/experiment.hpp"

#include <fstream>
#include <numeric>

#include <spdlog/spdlog.h>

namespace sreldiag {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    return f;
}

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
    spdlog::info("stage {}", name);
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

void write_evaluation_csv(const std::vector<EvalReport>& reports, std::ostream& out) {
    out << "model,accuracy,mean_recall,macro_f1,cause_accuracy,param_count,samples\n";
    for (const auto& r : reports)
        out << r.model_id << ',' << format_double(r.accuracy) << ',' << format_double(r.mean_recall) << ','
            << format_double(r.macro_f1) << ',' << format_double(r.cause_accuracy) << ',' << r.param_count << ','
            << r.confusion.total() << '\n';
}

void write_sweep_text(const NoiseSweepReport& r, std::ostream& out) {
    out << "noise sweep (test split, additive white noise in dB)\n";
    for (const auto& s : r.summary)
        out << s.model << " sigma=" << format_double(s.level) << " accuracy=" << format_double(s.mean_accuracy)
            << " +- " << format_double(s.std_accuracy) << " (" << s.seeds << " seeds)\n";
}

}  // namespace

TsneResult embed_dataset(const LabeledDataset& ds, const TsneConfig& cfg, std::vector<std::size_t>* indices) {
    std::vector<std::size_t> idx(ds.size());
    std::iota(idx.begin(), idx.end(), 0);
    const Scaler scaler = ds.scaler() ? *ds.scaler() : fit_scaler(ds);
    const Matrix x = standardized_matrix(ds, scaler, idx);
    if (indices) *indices = idx;
    return tsne_embed(x, cfg);
}

ExperimentResult run_experiment(const RunConfig& cfg, const std::filesystem::path& out) {
    cfg.validate();
    ExperimentResult res;
    const auto hash = hex64(config_hash(cfg));
    const Json config_json = config_to_json(cfg);
    std::filesystem::create_directories(out / "models");
    std::filesystem::create_directories(out / "reports");
    write_json_file(out / "config.json", config_json);

    Json artifacts = Json::array();
    auto artifact = [&](const std::string& kind, const std::string& rel) {
        artifacts.push_back({{"kind", kind}, {"path", rel}});
    };
    artifact("config", "config.json");

    res.dataset = stage("synth", [&] {
        auto ds = make_dataset(cfg);
        ds.set_scaler(fit_scaler(ds));
        write_dataset_csv(ds, out / "dataset.csv");
        return ds;
    });
    artifact("dataset", "dataset.csv");

    Json seeds;
    seeds["run"] = cfg.seed;
    seeds["synth"] = cfg.synth_seed();
    seeds["split"] = cfg.split_seed();
    for (auto m : cfg.methods) {
        const std::string name(method_name(m));
        res.models.push_back(stage("train:" + name, [&] {
            auto tm = train_method(m, res.dataset, cfg);
            save_model(tm, out / "models" / name);
            return tm;
        }));
        seeds[name] = cfg.method_seed(m);
        artifact("model", "models/" + name);
    }

    stage("evaluate", [&] {
        for (const auto& m : res.models) {
            auto r = evaluate(m.under_test(), res.dataset, Split::Test);
            auto f = open_out(out / "reports" / (m.id() + ".txt"));
            write_report_text(r, f);
            f << "config_hash: " << hash << "\nconfig: " << config_json.dump() << '\n';
            artifact("report", "reports/" + m.id() + ".txt");
            res.reports.push_back(std::move(r));
        }
        auto f = open_out(out / "evaluation.csv");
        write_evaluation_csv(res.reports, f);
        auto p = open_out(out / "per_class.csv");
        write_report_csv(res.reports, p);
        auto c = open_out(out / "confusion.csv");
        write_confusion_csv(res.reports, c);
        return 0;
    });
    artifact("table", "evaluation.csv");
    artifact("table", "per_class.csv");
    artifact("table", "confusion.csv");

    stage("noise-sweep", [&] {
        std::vector<ModelUnderTest> muts;
        for (const auto& m : res.models) muts.push_back(m.under_test());
        NoiseSweepConfig nc = cfg.noise;
        nc.threads = cfg.threads;
        res.sweep = noise_sweep(muts, res.dataset, nc);
        auto a = open_out(out / "noise_sweep_cells.csv");
        write_sweep_cells_csv(res.sweep, a);
        auto b = open_out(out / "noise_sweep_summary.csv");
        write_sweep_summary_csv(res.sweep, b);
        auto t = open_out(out / "noise_sweep.txt");
        write_sweep_text(res.sweep, t);
        t << "config_hash: " << hash << "\nconfig: " << config_json.dump() << '\n';
        return 0;
    });
    seeds["noise"] = cfg.noise.seeds;
    artifact("table", "noise_sweep_cells.csv");
    artifact("table", "noise_sweep_summary.csv");
    artifact("report", "noise_sweep.txt");

    stage("embed", [&] {
        TsneConfig tc = cfg.tsne;
        tc.seed = cfg.tsne_seed();
        std::vector<std::size_t> idx;
        res.embedding = embed_dataset(res.dataset, tc, &idx);
        auto f = open_out(out / "embedding.csv");
        write_embedding_csv(res.dataset, idx, res.embedding.embedding, f);
        return 0;
    });
    seeds["tsne"] = cfg.tsne_seed();
    artifact("embedding", "embedding.csv");

    if (cfg.benchmark) {
        stage("benchmark", [&] {
            std::vector<std::vector<double>> patterns;
            for (auto i : res.dataset.indices(Split::Test)) patterns.push_back(res.dataset[i].pattern.magnitude_db);
            Json rows = Json::array();
            for (const auto& m : res.models) {
                const auto b = benchmark_inference(m.under_test(), patterns, cfg.benchmark_repetitions);
                rows.push_back({{"model", b.model_id},
                                {"mean_ms_per_sample", b.mean_ms_per_sample},
                                {"param_count", b.param_count},
                                {"repetitions", b.repetitions},
                                {"samples", b.samples}});
                res.benchmarks.push_back(b);
            }
            write_json_file(out / "benchmark.json", {{"timing", rows}, {"config_hash", hash}});
            return 0;
        });
        artifact("timing", "benchmark.json");
    }

    Json summary = Json::array();
    for (const auto& r : res.reports)
        summary.push_back({{"model", r.model_id}, {"accuracy", r.accuracy}, {"macro_f1", r.macro_f1}});
    res.manifest = {{"tool", "sreldiag"},
                    {"config_hash", hash},
                    {"seeds", seeds},
                    {"samples", res.dataset.size()},
                    {"results", summary},
                    {"tsne", {{"initial_kl", res.embedding.initial_kl}, {"final_kl", res.embedding.final_kl}}},
                    {"artifacts", artifacts},
                    {"config", config_json}};
    write_json_file(out / "manifest.json", res.manifest);
    return res;
}

}  // namespace sreldiag
