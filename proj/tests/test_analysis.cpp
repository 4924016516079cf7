// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "sreldiag/analysis.hpp"

using namespace sreldiag;

namespace {

// Per-class F1 from raw counts; 0 when undefined.
double f1_oracle(std::span<const std::size_t> t, std::span<const std::size_t> p, std::size_t c) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        tp += t[i] == c && p[i] == c;
        fp += t[i] != c && p[i] == c;
        fn += t[i] == c && p[i] != c;
    }
    return tp == 0 ? 0.0 : 2 * tp / (2 * tp + fp + fn);
}

Matrix two_blobs(std::size_t per, std::size_t dims, double sep, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01;
    Matrix x(2 * per, dims);
    for (std::size_t i = 0; i < 2 * per; ++i)
        for (std::size_t d = 0; d < dims; ++d) x(i, d) = n01(rng) + (i >= per && d == 0 ? sep : 0.0);
    return x;
}

LabeledDataset tiny_dataset() {
    auto grid = std::make_shared<const FrequencyGrid>(FrequencyGrid::linear(1e9, 2e9, 3));
    LabeledDataset ds(grid);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n01;
    for (std::size_t c = 0; c < kNumClasses; ++c)
        for (int i = 0; i < 4; ++i) {
            SignalPattern p{grid, {-10.0 * static_cast<double>(c) + 0.3 * n01(rng), n01(rng), n01(rng)}};
            ds.add({"s" + std::to_string(c) + "_" + std::to_string(i), p, DefectLabel::from_class_index(c),
                    i < 2 ? Split::Train : Split::Test});
        }
    return ds;
}

// Nearest class centre on the first bin.
ModelUnderTest centre_model() {
    return {"centre", [](std::span<const double> x) {
                const long c = std::lround(-x[0] / 10.0);
                return static_cast<std::size_t>(std::clamp(c, 0L, 6L));
            },
            1};
}

}  // namespace

TEST_CASE("metrics hand case") {
    const std::size_t truth[] = {0, 0, 1, 1};
    const std::size_t pred[] = {0, 1, 1, 1};
    const auto r = make_report("m", truth, pred, 2);
    CHECK(r.accuracy == 0.75);
    CHECK(r.per_class[0].f1 == doctest::Approx(2.0 / 3.0));
    CHECK(r.per_class[1].f1 == doctest::Approx(0.8));
    CHECK(r.macro_f1 == doctest::Approx(0.7333333333333333));
    CHECK(r.mean_recall == doctest::Approx(0.75));
    CHECK(r.confusion.at(0, 1) == 1);
    CHECK(r.confusion.total() == 4);

    const auto perfect = make_report("p", truth, truth, 2);
    CHECK(perfect.accuracy == 1.0);
    CHECK(perfect.macro_f1 == 1.0);

    // Class 2 absent from both: F1 0 and flagged.
    const auto three = make_report("a", truth, pred, 3);
    CHECK(three.per_class[2].absent);
    CHECK(three.per_class[2].f1 == 0.0);
    CHECK(three.macro_f1 == doctest::Approx((2.0 / 3.0 + 0.8) / 3.0));
    CHECK_FALSE(three.per_class[0].absent);
}

TEST_CASE("metrics properties") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 50; ++t) {
        std::vector<std::size_t> truth(60), pred(60);
        for (std::size_t i = 0; i < 60; ++i) {
            truth[i] = rng() % 7;
            pred[i] = rng() % 3 ? truth[i] : rng() % 7;
        }
        const auto r = make_report("r", truth, pred);
        double f1 = 0.0;
        for (std::size_t c = 0; c < 7; ++c) {
            CHECK(r.per_class[c].f1 == doctest::Approx(f1_oracle(truth, pred, c)));
            f1 += f1_oracle(truth, pred, c);
            CHECK(r.confusion.row_sum(c) == static_cast<std::size_t>(std::count(truth.begin(), truth.end(), c)));
        }
        CHECK(r.macro_f1 == doctest::Approx(f1 / 7.0));
        std::size_t trace = 0;
        for (std::size_t c = 0; c < 7; ++c) trace += r.confusion.at(c, c);
        CHECK(r.accuracy == doctest::Approx(static_cast<double>(trace) / 60.0));
        CHECK((r.accuracy >= 0.0 && r.accuracy <= 1.0 && r.macro_f1 >= 0.0 && r.macro_f1 <= 1.0));

        std::vector<std::size_t> perm{4, 2, 6, 0, 1, 5, 3}, pt(60), pp(60);
        for (std::size_t i = 0; i < 60; ++i) {
            pt[i] = perm[truth[i]];
            pp[i] = perm[pred[i]];
        }
        CHECK(make_report("p", pt, pp).macro_f1 == doctest::Approx(r.macro_f1).epsilon(1e-12));
    }
    const std::size_t a[] = {0};
    CHECK_THROWS_AS(make_report("x", a, std::span<const std::size_t>{}), InvalidArgument);
}

TEST_CASE("evaluate and report output") {
    const auto ds = tiny_dataset();
    const auto r = evaluate(centre_model(), ds);
    CHECK(r.accuracy == 1.0);
    CHECK(r.confusion.total() == 14);
    CHECK(r.cause_accuracy == 1.0);

    std::ostringstream txt, csv, conf;
    write_report_text(r, txt);
    write_report_csv({r}, csv);
    write_confusion_csv({r}, conf);
    CHECK(txt.str().find("accuracy") != std::string::npos);
    CHECK(csv.str().rfind("model,class,precision,recall,f1,support,absent\n", 0) == 0);
    CHECK(conf.str().rfind("model,true,predicted,count\n", 0) == 0);
    const auto csv_text = csv.str();
    CHECK(std::count(csv_text.begin(), csv_text.end(), '\n') == 8);

    auto none = ds;
    for (auto& s : none.samples()) s.split = Split::Train;
    CHECK_THROWS(evaluate(centre_model(), none));
}

TEST_CASE("benchmark") {
    const std::vector<std::vector<double>> pats(10, std::vector<double>{-20.0, 0.0, 0.0});
    const auto b = benchmark_inference(centre_model(), pats, 100, 5);
    CHECK(b.repetitions == 100);
    CHECK(b.samples == 10);
    CHECK(b.param_count == 1);
    CHECK(b.mean_ms_per_sample >= 0.0);
}

TEST_CASE("t-SNE affinities") {
    const auto x = two_blobs(20, 5, 8.0, 1);
    const auto p = tsne_affinities(x, 10.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < p.rows; ++i) {
        CHECK(p(i, i) == 0.0);
        for (std::size_t j = 0; j < p.cols; ++j) {
            CHECK(p(i, j) >= 0.0);
            CHECK(p(i, j) == p(j, i));
            sum += p(i, j);
        }
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
    CHECK_THROWS_AS(tsne_affinities(x, 14.0), PerplexityInfeasible);
    CHECK_THROWS_AS(tsne_affinities(x, 4.0), PerplexityInfeasible);

    CHECK(tsne_kl(p, two_blobs(20, 2, 3.0, 2)) >= 0.0);
}

TEST_CASE("t-SNE embedding") {
    const auto x = two_blobs(30, 10, 10.0, 5);
    TsneConfig cfg;
    cfg.perplexity = 10.0;
    cfg.iterations = 500;
    cfg.seed = 7;
    const auto a = tsne_embed(x, cfg);
    const auto b = tsne_embed(x, cfg);
    CHECK(a.embedding == b.embedding);
    CHECK(a.final_kl < a.initial_kl);
    std::vector<std::size_t> labels(60);
    for (std::size_t i = 30; i < 60; ++i) labels[i] = 1;
    CHECK(silhouette_score(a.embedding, labels) > 0.5);
    cfg.seed = 8;
    CHECK_FALSE(tsne_embed(x, cfg).embedding == a.embedding);

    SUBCASE("duplicated points") {
        const auto big = two_blobs(100, 10, 10.0, 5);
        Matrix d = big;
        d.rows += 1;
        d.data.insert(d.data.end(), big.row(3).begin(), big.row(3).end());
        cfg.seed = 7;
        const auto e = tsne_embed(d, cfg).embedding;
        double diameter = 0.0;
        for (std::size_t i = 0; i < e.rows; ++i)
            for (std::size_t j = 0; j < e.rows; ++j)
                diameter = std::max(diameter, std::hypot(e(i, 0) - e(j, 0), e(i, 1) - e(j, 1)));
        CHECK(std::hypot(e(3, 0) - e(200, 0), e(3, 1) - e(200, 1)) < 0.01 * diameter);
    }
}

TEST_CASE("silhouette") {
    Matrix y(4, 2);
    y(0, 0) = 0;
    y(1, 0) = 1;
    y(2, 0) = 10;
    y(3, 0) = 11;
    const std::size_t l[] = {0, 0, 1, 1};
    // a = 1 everywhere; b = 10.5 for the outer points, 9.5 for the inner ones.
    const double s0 = 1.0 - 1.0 / 10.5, s1 = 1.0 - 1.0 / 9.5;
    CHECK(silhouette_score(y, l) == doctest::Approx((2 * s0 + 2 * s1) / 4.0));
}

TEST_CASE("noise sweep") {
    const auto ds = tiny_dataset();
    const auto clean = evaluate(centre_model(), ds);
    const ModelUnderTest models[] = {centre_model()};

    NoiseSweepConfig zero;
    zero.levels = {0.0};
    zero.seeds = {1, 2};
    const auto z = noise_sweep(models, ds, zero);
    CHECK(z.at("centre", 0.0).mean_accuracy == clean.accuracy);
    CHECK(z.at("centre", 0.0).std_accuracy == 0.0);

    NoiseSweepConfig cfg;
    cfg.levels = {0.0, 1.0, 4.0, 16.0};
    const auto a = noise_sweep(models, ds, cfg);
    NoiseSweepConfig par = cfg;
    par.threads = 3;
    const auto b = noise_sweep(models, ds, par);
    REQUIRE(a.cells.size() == 4 * 5);
    for (std::size_t i = 0; i < a.cells.size(); ++i) CHECK(a.cells[i].accuracy == b.cells[i].accuracy);
    CHECK(a.at("centre", 16.0).mean_accuracy <= a.at("centre", 0.0).mean_accuracy);
    CHECK(a.at("centre", 16.0).seeds == 5);

    // Sample std over the per-seed cells.
    double m = 0.0, v = 0.0;
    for (std::size_t s = 0; s < 5; ++s) m += a.cells[15 + s].accuracy / 5.0;
    for (std::size_t s = 0; s < 5; ++s) v += (a.cells[15 + s].accuracy - m) * (a.cells[15 + s].accuracy - m) / 4.0;
    CHECK(a.at("centre", 16.0).mean_accuracy == doctest::Approx(m));
    CHECK(a.at("centre", 16.0).std_accuracy == doctest::Approx(std::sqrt(v)));

    std::ostringstream cells, sum;
    write_sweep_cells_csv(a, cells);
    write_sweep_summary_csv(a, sum);
    const auto cells_text = cells.str(), sum_text = sum.str();
    CHECK(std::count(cells_text.begin(), cells_text.end(), '\n') == 21);
    CHECK(std::count(sum_text.begin(), sum_text.end(), '\n') == 5);
}
