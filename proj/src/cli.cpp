// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include "sreldiag/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "sreldiag/experiment.hpp"
#include "sreldiag/touchstone.hpp"

namespace sreldiag {

namespace {

struct CommonOpts {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o, const std::string& out_help) {
    cmd->add_option("--config", o.config, "Run configuration (JSON)");
    cmd->add_option("--seed", o.seed, "Run seed (overrides the config)");
    cmd->add_option("--threads", o.threads, "Worker threads; 1 is bit-reproducible");
    cmd->add_option("--out", o.out, out_help);
}

RunConfig resolve_config(const CommonOpts& o) {
    RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (o.seed) c.seed = *o.seed;
    if (o.threads) c.threads = *o.threads;
    c.noise.threads = c.threads;
    c.validate();
    return c;
}

std::filesystem::path out_dir(const CommonOpts& o, const std::string& fallback) {
    return o.out.empty() ? std::filesystem::path(fallback) : std::filesystem::path(o.out);
}

LabeledDataset load_or_make_dataset(const RunConfig& cfg, const std::string& data) {
    LabeledDataset ds;
    if (data.empty()) {
        ds = make_dataset(cfg);
    } else {
        ds = read_dataset_csv(std::filesystem::path(data));
        if (ds.indices(Split::Unassigned).size() == ds.size()) ds = split_dataset(ds, cfg.split, cfg.split_seed());
    }
    if (!ds.scaler()) ds.set_scaler(fit_scaler(ds));
    return ds;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    return f;
}

Json diagnosis_record(const TrainedModel& m, std::span<const double> raw_db, const std::string& input) {
    Json r;
    r["input"] = input;
    r["model"] = m.id();
    if (m.method == Method::Srel) {
        const auto d = diagnose(*m.srel, raw_db);
        r["cause"] = std::string(cause_name(d.cause));
        r["severity"] = d.severity;
        r["class_code"] = d.class_code();
        r["output_vector"] = d.output_vector;
        r["tie_break_used"] = d.tie_break_used;
        r["logistic_sums"] = d.logistic_sums;
    } else {
        const auto label = DefectLabel::from_class_index(m.predict(raw_db));
        r["cause"] = std::string(cause_name(label.cause));
        r["severity"] = label.severity;
        r["class_code"] = label.code();
        r["output_vector"] = nullptr;
        r["tie_break_used"] = false;
    }
    return r;
}

void setup_logging() {
    auto logger = std::make_shared<spdlog::logger>("sreldiag", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("SRELDIAG_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    setup_logging();
    CLI::App app{"sreldiag: severity rating ensemble diagnosis of interconnect reflection patterns"};
    app.require_subcommand(1);

    CommonOpts synth_o, train_o, eval_o, diag_o, sweep_o, embed_o, exp_o;
    std::string method, train_data, eval_model, eval_data, diag_model, diag_data, diag_id, diag_ts, sweep_data,
        embed_data;
    std::vector<std::string> sweep_models;

    auto* synth = app.add_subcommand("synth", "Synthesize the labelled dataset");
    add_common(synth, synth_o, "Output directory (dataset.csv)");

    auto* train = app.add_subcommand("train", "Train one method and write its bundle");
    add_common(train, train_o, "Bundle directory");
    train->add_option("--method", method, "srel, multiclass, rf, kmeans or point-rf")->required();
    train->add_option("--data", train_data, "Dataset CSV (default: synthesize)");

    auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate a bundle on the test split");
    add_common(evaluate_cmd, eval_o, "Report directory");
    evaluate_cmd->add_option("--model", eval_model, "Bundle directory")->required();
    evaluate_cmd->add_option("--data", eval_data, "Dataset CSV (default: synthesize)");

    auto* diag = app.add_subcommand("diagnose", "Diagnose one pattern");
    add_common(diag, diag_o, "Directory for diagnosis.json");
    diag->add_option("--model", diag_model, "Bundle directory")->required();
    auto* data_opt = diag->add_option("--data", diag_data, "Dataset CSV");
    diag->add_option("--id", diag_id, "Sample id within --data")->needs(data_opt);
    auto* ts_opt = diag->add_option("--touchstone", diag_ts, "Touchstone .s1p file");
    ts_opt->excludes(data_opt);

    auto* sweep = app.add_subcommand("noise-sweep", "Accuracy under additive noise");
    add_common(sweep, sweep_o, "Report directory");
    sweep->add_option("--model", sweep_models, "Bundle directories")->required();
    sweep->add_option("--data", sweep_data, "Dataset CSV (default: synthesize)");

    auto* embed = app.add_subcommand("embed", "t-SNE embedding export");
    add_common(embed, embed_o, "Output directory (embedding.csv)");
    embed->add_option("--data", embed_data, "Dataset CSV (default: synthesize)");

    auto* exp = app.add_subcommand("experiment", "Full pipeline with manifest");
    add_common(exp, exp_o, "Output directory");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        if (app.get_subcommands().size() == 1) err << app.get_subcommands().front()->help();
        return 2;
    }

    try {
        if (synth->parsed()) {
            const RunConfig cfg = resolve_config(synth_o);
            const auto dir = out_dir(synth_o, "sreldiag-out");
            const auto ds = make_dataset(cfg);
            std::filesystem::create_directories(dir);
            write_dataset_csv(ds, dir / "dataset.csv");
            out << "wrote " << ds.size() << " samples to " << (dir / "dataset.csv").string() << '\n';
        } else if (train->parsed()) {
            const RunConfig cfg = resolve_config(train_o);
            const Method m = parse_method(method);
            const auto ds = load_or_make_dataset(cfg, train_data);
            const auto dir = out_dir(train_o, "sreldiag-out/" + std::string(method_name(m)));
            const auto tm = train_method(m, ds, cfg);
            save_model(tm, dir);
            out << "wrote " << tm.id() << " bundle to " << dir.string() << " (" << tm.param_count()
                << " parameters)\n";
        } else if (evaluate_cmd->parsed()) {
            const RunConfig cfg = resolve_config(eval_o);
            const auto tm = load_model(eval_model);
            const auto ds = load_or_make_dataset(cfg, eval_data);
            const auto r = evaluate(tm.under_test(), ds, Split::Test);
            write_report_text(r, out);
            if (!eval_o.out.empty()) {
                auto f = open_out(std::filesystem::path(eval_o.out) / (tm.id() + ".txt"));
                write_report_text(r, f);
                f << "config: " << config_to_json(cfg).dump() << '\n';
                auto c = open_out(std::filesystem::path(eval_o.out) / (tm.id() + "_per_class.csv"));
                write_report_csv({r}, c);
            }
        } else if (diag->parsed()) {
            const auto tm = load_model(diag_model);
            Json rec;
            if (!diag_ts.empty()) {
                const auto sweep_in = read_touchstone_s1p(diag_ts);
                if (!tm.grid->matches(sweep_in.frequency_hz))
                    throw GridMismatch("touchstone file has " + std::to_string(sweep_in.frequency_hz.size()) +
                                       " frequency points that do not match the model grid (expected N = " +
                                       std::to_string(tm.grid->size()) + ")");
                rec = diagnosis_record(tm, sweep_in.magnitude_db(), diag_ts);
            } else {
                if (diag_data.empty() || diag_id.empty())
                    throw ConfigError("diagnose needs --touchstone or --data with --id");
                const auto ds = read_dataset_csv(std::filesystem::path(diag_data));
                const auto it = std::find_if(ds.samples().begin(), ds.samples().end(),
                                             [&](const LabeledSample& s) { return s.id == diag_id; });
                if (it == ds.samples().end()) throw ConfigError("no sample with id '" + diag_id + "' in " + diag_data);
                if (!tm.grid->matches(ds.grid()->points()))
                    throw GridMismatch("dataset grid does not match the model grid (expected N = " +
                                       std::to_string(tm.grid->size()) + ")");
                rec = diagnosis_record(tm, it->pattern.magnitude_db, diag_id);
            }
            out << rec.dump(2) << '\n';
            if (!diag_o.out.empty()) {
                std::filesystem::create_directories(diag_o.out);
                write_json_file(std::filesystem::path(diag_o.out) / "diagnosis.json", rec);
            }
        } else if (sweep->parsed()) {
            const RunConfig cfg = resolve_config(sweep_o);
            const auto ds = load_or_make_dataset(cfg, sweep_data);
            std::vector<ModelUnderTest> muts;
            for (const auto& p : sweep_models) muts.push_back(load_model(p).under_test());
            const auto r = noise_sweep(muts, ds, cfg.noise);
            write_sweep_summary_csv(r, out);
            if (!sweep_o.out.empty()) {
                auto a = open_out(std::filesystem::path(sweep_o.out) / "noise_sweep_cells.csv");
                write_sweep_cells_csv(r, a);
                auto b = open_out(std::filesystem::path(sweep_o.out) / "noise_sweep_summary.csv");
                write_sweep_summary_csv(r, b);
            }
        } else if (embed->parsed()) {
            const RunConfig cfg = resolve_config(embed_o);
            const auto ds = load_or_make_dataset(cfg, embed_data);
            TsneConfig tc = cfg.tsne;
            tc.seed = cfg.tsne_seed();
            std::vector<std::size_t> idx;
            const auto r = embed_dataset(ds, tc, &idx);
            const auto dir = out_dir(embed_o, "sreldiag-out");
            auto f = open_out(dir / "embedding.csv");
            write_embedding_csv(ds, idx, r.embedding, f);
            out << "t-SNE KL " << format_double(r.initial_kl) << " -> " << format_double(r.final_kl) << "; wrote "
                << (dir / "embedding.csv").string() << '\n';
        } else if (exp->parsed()) {
            const RunConfig cfg = resolve_config(exp_o);
            const auto dir = out_dir(exp_o, "sreldiag-out");
            const auto res = run_experiment(cfg, dir);
            for (const auto& r : res.reports)
                out << r.model_id << ": accuracy " << format_double(r.accuracy) << ", macro-F1 "
                    << format_double(r.macro_f1) << '\n';
            out << "manifest: " << (dir / "manifest.json").string() << '\n';
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace sreldiag
