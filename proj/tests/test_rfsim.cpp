// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "sreldiag/dataset.hpp"
#include "sreldiag/rfsim.hpp"

using namespace sreldiag;

namespace {

// Input impedance of a uniform line of length len terminated in zl.
Complex line_input_impedance(const LineSection& s, double f, Complex zl) {
    const double w = 2.0 * std::numbers::pi * f;
    const Complex z(s.r + s.skin_coeff * std::sqrt(f), w * s.l);
    const Complex y(s.g, w * s.c);
    const Complex zc = std::sqrt(z / y);
    const Complex t = std::tanh(std::sqrt(z * y) * s.length);
    return zc * (zl + zc * t) / (zc + zl * t);
}

AbcdMatrix mul2x2(const AbcdMatrix& p, const AbcdMatrix& q) {
    Complex m[2][2] = {};
    const Complex a[2][2] = {{p.a, p.b}, {p.c, p.d}};
    const Complex b[2][2] = {{q.a, q.b}, {q.c, q.d}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) m[i][j] += a[i][k] * b[k][j];
    return {m[0][0], m[0][1], m[1][0], m[1][1]};
}

double l2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

std::vector<double> class_mean(const LabeledDataset& ds, std::size_t cls) {
    std::vector<double> m(ds.grid()->size(), 0.0);
    std::size_t n = 0;
    for (const auto& s : ds.samples()) {
        if (s.label.class_index() != cls) continue;
        for (std::size_t k = 0; k < m.size(); ++k) m[k] += s.pattern.magnitude_db[k];
        ++n;
    }
    for (double& v : m) v /= static_cast<double>(n);
    return m;
}

}  // namespace

TEST_CASE("reflection coefficient closed forms") {
    CHECK(std::abs(reflection_coefficient({50, 0}, {50, 0})) == 0.0);
    CHECK(reflection_coefficient({0, 0}, {50, 0}) == Complex(-1.0, 0.0));
    CHECK(reflection_coefficient({std::numeric_limits<double>::infinity(), 0}, {50, 0}) == Complex(1.0, 0.0));
    CHECK(std::abs(reflection_coefficient({100, 0}, {50, 0}) - Complex(1.0 / 3.0, 0.0)) < 1e-15);
    CHECK_THROWS_AS(reflection_coefficient({-50, 0}, {50, 0}), DegenerateDenominator);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e3, 1e3), pos(0.0, 1e3), z0d(1.0, 200.0);
    for (int i = 0; i < 500; ++i) {
        const Complex z(pos(rng), u(rng));
        CHECK(std::abs(reflection_coefficient(z, z)) == 0.0);
        CHECK(std::abs(reflection_coefficient(z, {z0d(rng), 0.0})) <= 1.0 + 1e-12);
    }
}

TEST_CASE("segment ABCD") {
    LineSection s;
    s.length = 0.0;
    const auto id = segment_abcd(s, 1e9);
    CHECK(std::abs(id.a - 1.0) < 1e-15);
    CHECK(std::abs(id.b) < 1e-15);
    CHECK(std::abs(id.c) < 1e-15);
    CHECK(std::abs(id.d - 1.0) < 1e-15);

    SUBCASE("lossless matches cos/sin form") {
        LineSection ll;
        ll.r = ll.g = ll.skin_coeff = 0.0;
        ll.length = 0.07;
        for (double f : {1e6, 3.3e8, 2e9, 1.3e10}) {
            const auto m = segment_abcd(ll, f);
            const double beta = 2.0 * std::numbers::pi * f * std::sqrt(ll.l * ll.c);
            const double zc = std::sqrt(ll.l / ll.c);
            CHECK(std::abs(m.a - Complex(std::cos(beta * ll.length), 0)) < 1e-9);
            CHECK(std::abs(m.b - Complex(0, zc * std::sin(beta * ll.length))) < 1e-9 * zc);
        }
    }

    SUBCASE("reciprocity") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 200; ++i) {
            LineSection r;
            r.r = 100 * u(rng);
            r.l = 1e-7 + 1e-6 * u(rng);
            r.g = 1e-3 * u(rng);
            r.c = 1e-11 + 1e-10 * u(rng);
            r.length = 0.1 * u(rng);
            r.skin_coeff = 0.1 * u(rng);
            const auto m = segment_abcd(r, 1e7 + 1.4e10 * u(rng));
            CHECK(std::abs(m.determinant() - 1.0) < 1e-9);
        }
    }

    SUBCASE("overflow guard") {
        LineSection big;
        big.r = 1e6;
        big.length = 1e3;
        CHECK_THROWS_AS(segment_abcd(big, 1e10), std::overflow_error);
    }
}

TEST_CASE("lumped elements and cascade") {
    const auto s0 = lumped_series_abcd({0, 0});
    CHECK(s0.a == Complex(1, 0));
    CHECK(s0.b == Complex(0, 0));
    const AbcdMatrix pair[] = {lumped_series_abcd({100, 0}), lumped_series_abcd({50, 0})};
    const auto c = cascade(pair);
    CHECK(c.b == Complex(150, 0));
    CHECK(c.a == Complex(1, 0));
    CHECK(lumped_series_abcd({3, 7}).determinant() == Complex(1, 0));
    const AbcdMatrix ids[] = {AbcdMatrix::identity(), AbcdMatrix::identity()};
    const auto ci = cascade(ids);
    CHECK((ci.a == Complex(1, 0) && ci.b == Complex(0, 0) && ci.c == Complex(0, 0) && ci.d == Complex(1, 0)));
    CHECK_THROWS_AS(cascade(std::span<const AbcdMatrix>{}), InvalidArgument);

    LineSection sec;
    const AbcdMatrix fwd[] = {lumped_series_abcd({20, 5}), segment_abcd(sec, 3e9)};
    const AbcdMatrix rev[] = {fwd[1], fwd[0]};
    const auto m1 = cascade(fwd), m2 = cascade(rev);
    const auto o1 = mul2x2(fwd[0], fwd[1]), o2 = mul2x2(rev[0], rev[1]);
    CHECK(std::abs(m1.a - o1.a) < 1e-12);
    CHECK(std::abs(m1.b - o1.b) < 1e-12);
    CHECK(std::abs(m1.c - o1.c) < 1e-15);
    CHECK(std::abs(m1.d - o1.d) < 1e-12);
    CHECK(std::abs(m2.b - o2.b) < 1e-12);
    CHECK(std::abs(m1.b - m2.b) < 1e-9);  // symmetric line: A = D
    CHECK(std::abs(m1.a - m2.a) > 1e-3);

    const AbcdMatrix shunt[] = {lumped_shunt_abcd({0.01, 0.0})};
    CHECK(cascade(shunt).c == Complex(0.01, 0));
}

TEST_CASE("abcd_to_s11") {
    CHECK(std::abs(abcd_to_s11(AbcdMatrix::identity(), 50.0)) == 0.0);
    CHECK(std::abs(abcd_to_s11(lumped_series_abcd({100, 0}), 50.0) - 0.5) < 1e-15);
    // Shunt admittance y to a matched load: -y z0 / (2 + y z0).
    const Complex y(0.004, 0.01);
    CHECK(std::abs(abcd_to_s11(lumped_shunt_abcd(y), 50.0) - (-y * 50.0 / (2.0 + y * 50.0))) < 1e-14);

    // Uniform line into zref against the input-impedance formula.
    LineSection s;
    for (double f : {1e7, 1e9, 7.7e9, 1.4e10}) {
        const Complex zin = line_input_impedance(s, f, {50, 0});
        const Complex expect = (zin - 50.0) / (zin + 50.0);
        CHECK(std::abs(abcd_to_s11(segment_abcd(s, f), 50.0) - expect) < 1e-12);
    }
    CHECK(to_db(Complex(0.1, 0)) == doctest::Approx(-20.0));
    CHECK(to_db(Complex(0, 0)) == doctest::Approx(-300.0));
}

TEST_CASE("synthesize_pattern") {
    auto grid = std::make_shared<const FrequencyGrid>(FrequencyGrid::standard());
    SynthesisConfig cfg;

    SUBCASE("deterministic and passive") {
        const auto sc = DefectScenario::sample({Cause::Mechanical, 2}, 77);
        const auto a = synthesize_pattern(sc, grid, cfg, 5);
        const auto b = synthesize_pattern(sc, grid, cfg, 5);
        CHECK(a == b);
        REQUIRE(a.size() == 201);
        for (double v : a.magnitude_db) {
            CHECK(std::isfinite(v));
            CHECK(v <= 1e-9);
        }
    }

    SUBCASE("defect-free case equals the direct line formula") {
        cfg.variation_sigma = 0.0;
        const DefectScenario normal{{Cause::Normal, 0}, 0, 0.0, 9};
        const auto p = synthesize_pattern(normal, grid, cfg, 1);
        for (std::size_t i = 0; i < grid->size(); i += 10) {
            const double f = (*grid)[i];
            const Complex zin = line_input_impedance(cfg.nominal, f, {50, 0});
            CHECK(p.magnitude_db[i] == doctest::Approx(to_db((zin - 50.0) / (zin + 50.0))).epsilon(1e-7));
        }
    }

    SUBCASE("scenario sampling respects the level tables") {
        for (int k = 1; k <= 3; ++k) {
            const auto m = DefectScenario::sample({Cause::Mechanical, k}, 100 + k);
            CHECK(m.crack_count == DefectScenario::cracks_for_level(k));
            CHECK(m.corrosion_fraction == 0.0);
            const auto c = DefectScenario::sample({Cause::Corrosion, k}, 200 + k);
            const auto [lo, hi] = DefectScenario::corrosion_band(k);
            CHECK(c.crack_count == 0);
            CHECK(c.corrosion_fraction > lo);
            CHECK(c.corrosion_fraction <= hi);
        }
        CHECK(DefectScenario::cracks_for_level(3) == 5);
        const auto n = DefectScenario::sample({Cause::Normal, 0}, 1);
        CHECK(n.crack_count == 0);
        CHECK(n.corrosion_fraction == 0.0);
    }

    SUBCASE("C3 departs from Normal further than M1") {
        const auto ds = synthesize_dataset(grid, {50, 50, 0, 0, 0, 0, 50}, cfg, 4);
        const auto normal = class_mean(ds, 0);
        CHECK(l2(class_mean(ds, 6), normal) > l2(class_mean(ds, 1), normal));
    }

    SUBCASE("monotone severity trend without variation") {
        cfg.variation_sigma = 0.0;
        const auto ds = synthesize_dataset(grid, {10, 20, 20, 20, 20, 20, 20}, cfg, 8);
        const auto normal = class_mean(ds, 0);
        CHECK(l2(class_mean(ds, 1), normal) < l2(class_mean(ds, 2), normal));
        CHECK(l2(class_mean(ds, 2), normal) < l2(class_mean(ds, 3), normal));
        CHECK(l2(class_mean(ds, 4), normal) < l2(class_mean(ds, 5), normal));
        CHECK(l2(class_mean(ds, 5), normal) < l2(class_mean(ds, 6), normal));
    }
}

TEST_CASE("noise injection") {
    auto grid = std::make_shared<const FrequencyGrid>(FrequencyGrid::standard());
    const auto p = synthesize_pattern(DefectScenario::sample({Cause::Corrosion, 1}, 3), grid, {}, 3);
    CHECK(inject_noise(p, 0.0, 1) == p);
    CHECK(inject_noise(p, 1.5, 42) == inject_noise(p, 1.5, 42));
    CHECK_THROWS_AS(inject_noise(p, -1.0, 1), InvalidArgument);

    std::vector<double> v(100000, 0.0);
    add_gaussian_noise(v, 2.0, 2024);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    const double sd = std::sqrt(var / static_cast<double>(v.size() - 1));
    CHECK(std::abs(mean) < 0.05);
    CHECK(sd >= 1.95);
    CHECK(sd <= 2.05);
}

TEST_CASE("frequency grid") {
    const auto g = FrequencyGrid::standard();
    CHECK(g.size() == 201);
    CHECK(g.front() == 10e6);
    CHECK(g.back() == 14e9);
    CHECK(g[g.nearest_index(8e9)] == doctest::Approx(8e9).epsilon(0.01));
    const double step = g[1] - g[0];
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(g[g.nearest_index(8e9)] - 8e9) <= std::abs(g[i] - 8e9));
    CHECK(step > 0.0);
    CHECK_THROWS_AS(FrequencyGrid({1.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(FrequencyGrid({2.0, 1.0}), InvalidArgument);
    CHECK(g.matches(g.points()));
    CHECK(g.hash() == FrequencyGrid::standard().hash());
    CHECK(g.hash() != FrequencyGrid::linear(10e6, 14e9, 200).hash());
}
