// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sreldiag/cli.hpp"
#include "sreldiag/config.hpp"
#include "sreldiag/experiment.hpp"
#include "sreldiag/srel.hpp"
#include "sreldiag/touchstone.hpp"

using namespace sreldiag;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int s = run_cli(args, out, err);
    return {s, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("sreldiag_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

RunConfig small_config() {
    RunConfig c;
    c.grid.points = 41;
    c.counts = {20, 12, 12, 12, 12, 12, 12};
    c.train.lr = 3e-3;
    c.train.batch = 32;
    c.train.max_epochs = 20;
    c.train.patience = 5;
    c.forest.n_trees = 10;
    c.noise.levels = {0.0, 2.0};
    c.noise.seeds = {1, 2};
    c.tsne.perplexity = 5.0;
    c.tsne.iterations = 300;
    c.benchmark_repetitions = 100;
    return c;
}

fs::path write_config(const fs::path& dir, const RunConfig& c) {
    const auto p = dir / "config.json";
    write_json_file(p, config_to_json(c));
    return p;
}

std::shared_ptr<const BinaryScorer> constant_scorer(double logit, std::size_t dim) {
    Network n(NetworkSpec::logistic(dim));
    n.params()[dim] = logit;
    return std::make_shared<NetworkScorer>(std::move(n));
}

}  // namespace

TEST_CASE("usage errors exit 2") {
    CHECK(cli({}).status == 2);
    CHECK(cli({"bogus"}).status == 2);
    CHECK(cli({"train"}).status == 2);
    const auto dir = scratch("usage");
    const auto r = cli({"train", "--method", "svm", "--config", write_config(dir, small_config()).string(), "--out",
                        (dir / "m").string()});
    CHECK(r.status == 2);
    CHECK(r.err.find("svm") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "m"));
    CHECK(cli({"synth", "--config", (dir / "missing.json").string()}).status == 2);
    fs::remove_all(dir);
}

TEST_CASE("config validation happens before any write") {
    const auto dir = scratch("counts");
    auto c = small_config();
    c.counts[3] = 4;
    const auto r = cli({"synth", "--config", write_config(dir, c).string(), "--out", (dir / "out").string()});
    CHECK(r.status == 2);
    CHECK_FALSE(fs::exists(dir / "out"));

    std::ofstream(dir / "bad.json") << R"({"seed": 1, "colour": "red"})";
    CHECK(cli({"synth", "--config", (dir / "bad.json").string(), "--out", (dir / "out")}).status == 2);
    std::ofstream(dir / "bad2.json") << R"({"train": {"lr": -1}})";
    CHECK(cli({"synth", "--config", (dir / "bad2.json").string(), "--out", (dir / "out")}).status == 2);
    CHECK_FALSE(fs::exists(dir / "out"));
    fs::remove_all(dir);
}

TEST_CASE("config json and hash") {
    const RunConfig base;
    CHECK(config_from_json(config_to_json(base)).seed == base.seed);
    CHECK(config_to_json(config_from_json(config_to_json(base))) == config_to_json(base));
    CHECK(config_hash(base) == config_hash(config_from_json(config_to_json(base))));

    std::vector<RunConfig> variants(8, base);
    variants[0].seed = 43;
    variants[1].counts[6] = 161;
    variants[2].train.lr = 1e-4;
    variants[3].noise.levels.push_back(16.0);
    variants[4].forest.max_depth = 6;
    variants[5].synthesis.corrosion_kappa = 4.5;
    variants[6].methods.pop_back();
    variants[7].tsne.perplexity = 20.0;
    for (const auto& v : variants) CHECK(config_hash(v) != config_hash(base));
    for (std::size_t i = 0; i < variants.size(); ++i)
        for (std::size_t j = i + 1; j < variants.size(); ++j) CHECK(config_hash(variants[i]) != config_hash(variants[j]));

    CHECK_THROWS_AS(parse_method("svm"), ConfigError);
    CHECK(parse_method("point-rf") == Method::PointRf);
    auto bad = base;
    bad.split.train = 0.7;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("synth") {
    const auto dir = scratch("synth");
    const auto a = cli({"synth", "--out", (dir / "a").string()});
    REQUIRE(a.status == 0);
    const auto b = cli({"synth", "--out", (dir / "b").string()});
    REQUIRE(b.status == 0);
    const auto ta = slurp(dir / "a" / "dataset.csv");
    CHECK(ta == slurp(dir / "b" / "dataset.csv"));
    const auto ds = read_dataset_csv(dir / "a" / "dataset.csv");
    CHECK(ds.size() == 790);
    CHECK(ds.class_histogram() == kPaperClassCounts);
    CHECK(std::count(ta.begin(), ta.end(), '\n') == 792);

    CHECK(cli({"synth", "--seed", "7", "--out", (dir / "c").string()}).status == 0);
    CHECK(slurp(dir / "c" / "dataset.csv") != ta);
    fs::remove_all(dir);
}

TEST_CASE("train, evaluate, sweep and embed") {
    const auto dir = scratch("train");
    const auto cfg = write_config(dir, small_config()).string();
    REQUIRE(cli({"synth", "--config", cfg, "--out", dir.string()}).status == 0);
    const auto data = (dir / "dataset.csv").string();

    const auto srel = cli({"train", "--method", "srel", "--config", cfg, "--data", data, "--out", (dir / "srel").string()});
    REQUIRE(srel.status == 0);
    const auto man = read_json_file(dir / "srel" / "manifest.json");
    CHECK(man.at("method") == "srel");
    CHECK(man.at("scorers").size() == 7);
    CHECK(fs::exists(dir / "srel" / "training_log.json"));

    const auto km = cli({"train", "--method", "kmeans", "--config", cfg, "--data", data, "--out", (dir / "km").string()});
    REQUIRE(km.status == 0);
    const auto kman = read_json_file(dir / "km" / "manifest.json");
    CHECK(kman.at("centroids").size() == 7);
    CHECK(kman.at("label_map").size() == 7);

    REQUIRE(cli({"train", "--method", "rf", "--config", cfg, "--data", data, "--out", (dir / "rf").string()}).status == 0);

    const auto ev = cli({"evaluate", "--model", (dir / "rf").string(), "--config", cfg, "--data", data, "--out",
                         (dir / "eval").string()});
    CHECK(ev.status == 0);
    CHECK(ev.out.find("accuracy") != std::string::npos);

    const auto sw = cli({"noise-sweep", "--model", (dir / "rf").string(), "--model", (dir / "srel").string(), "--config",
                         cfg, "--data", data, "--out", (dir / "sweep").string()});
    CHECK(sw.status == 0);
    CHECK(fs::exists(dir / "sweep" / "noise_sweep_cells.csv"));

    const auto em = cli({"embed", "--config", cfg, "--data", data, "--out", (dir / "emb").string()});
    CHECK(em.status == 0);
    const auto emb = slurp(dir / "emb" / "embedding.csv");
    CHECK(emb.rfind("id,cause,severity,x,y\n", 0) == 0);
    CHECK(std::count(emb.begin(), emb.end(), '\n') == 93);

    const auto dg = cli({"diagnose", "--model", (dir / "srel").string(), "--data", data, "--id", "C3-0000"});
    CHECK(dg.status == 0);
    const auto rec = Json::parse(dg.out);
    CHECK(rec.at("output_vector").size() == 3);
    CHECK(rec.contains("tie_break_used"));

    const auto rf_dg = cli({"diagnose", "--model", (dir / "rf").string(), "--data", data, "--id", "C3-0000"});
    CHECK(rf_dg.status == 0);
    CHECK(Json::parse(rf_dg.out).at("output_vector").is_null());

    CHECK(cli({"diagnose", "--model", (dir / "srel").string(), "--data", data, "--id", "nope"}).status == 2);
    fs::remove_all(dir);
}

TEST_CASE("diagnose with a stubbed bundle") {
    const auto dir = scratch("stub");
    const auto grid = std::make_shared<const FrequencyGrid>(FrequencyGrid::standard());
    SrelModel m;
    m.normal_detector = constant_scorer(-2.0, 201);
    m.ladders = {{Cause::Mechanical, {constant_scorer(1.0, 201), constant_scorer(-1.0, 201), constant_scorer(-1.0, 201)}},
                 {Cause::Corrosion, {constant_scorer(3.0, 201), constant_scorer(2.0, 201), constant_scorer(1.0, 201)}}};
    m.scaler = {std::vector<double>(201, 0.0), std::vector<double>(201, 1.0)};
    m.grid = grid;
    save_srel_bundle(m, dir / "stub");

    OnePortSweep s;
    for (std::size_t i = 0; i < 201; ++i) {
        s.frequency_hz.push_back((*grid)[i]);
        s.s11.push_back({0.1, 0.0});
    }
    std::ofstream(dir / "ok.s1p") << write_touchstone_s1p(s, {FrequencyUnit::Hz, TouchstoneFormat::RI, 50.0});
    const auto ok = cli({"diagnose", "--model", (dir / "stub").string(), "--touchstone", (dir / "ok.s1p").string(),
                         "--out", (dir / "rec").string()});
    REQUIRE(ok.status == 0);
    const auto rec = read_json_file(dir / "rec" / "diagnosis.json");
    CHECK(rec.at("class_code") == "C3");
    CHECK(rec.at("output_vector") == Json::array({0, 1, 3}));
    CHECK(rec.at("tie_break_used") == false);

    s.frequency_hz.pop_back();
    s.s11.pop_back();
    std::ofstream(dir / "short.s1p") << write_touchstone_s1p(s, {FrequencyUnit::GHz, TouchstoneFormat::MA, 50.0});
    const auto bad = cli({"diagnose", "--model", (dir / "stub").string(), "--touchstone", (dir / "short.s1p").string()});
    CHECK(bad.status == 1);
    CHECK(bad.err.find("expected N = 201") != std::string::npos);

    const auto missing = cli({"diagnose", "--model", (dir / "stub").string(), "--touchstone", (dir / "x.s1p").string()});
    CHECK(missing.status == 1);
    fs::remove_all(dir);
}

TEST_CASE("experiment") {
    const auto dir = scratch("experiment");
    auto c = small_config();
    c.benchmark = false;
    const auto cfg = write_config(dir, c).string();
    const auto r = cli({"experiment", "--config", cfg, "--threads", "1", "--out", (dir / "run").string()});
    REQUIRE(r.status == 0);
    for (const char* f : {"dataset.csv", "evaluation.csv", "per_class.csv", "confusion.csv", "noise_sweep_cells.csv",
                          "noise_sweep_summary.csv", "embedding.csv", "manifest.json", "config.json"})
        CHECK(fs::exists(dir / "run" / f));
    std::size_t bundles = 0;
    for (const auto& e : fs::directory_iterator(dir / "run" / "models"))
        bundles += fs::exists(e.path() / "manifest.json");
    CHECK(bundles == 5);
    const auto man = read_json_file(dir / "run" / "manifest.json");
    CHECK(man.at("config_hash") == hex64(config_hash(load_config(cfg))));
    const auto report = slurp(dir / "run" / "reports" / "srel.txt");
    CHECK(report.find("config") != std::string::npos);
    fs::remove_all(dir);
}
