// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "sreldiag/common.hpp"
#include "sreldiag/touchstone.hpp"
#include "touchstone_corpus.hpp"

using namespace sreldiag;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

bool close(const OnePortSweep& a, const OnePortSweep& b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a.frequency_hz[i] - b.frequency_hz[i]) > tol * a.frequency_hz[i]) return false;
        if (std::abs(a.s11[i] - b.s11[i]) > tol) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("spec examples") {
    const auto ma = parse_touchstone_s1p("# GHz S MA R 50\n1.0 0.5 -45\n");
    REQUIRE(ma.size() == 1);
    CHECK(ma.frequency_hz[0] == 1e9);
    // 0.5 at -45 degrees: 0.5 (cos, sin) = (0.353553..., -0.353553...).
    CHECK(ma.s11[0].real() == doctest::Approx(0.35355339059327373).epsilon(1e-14));
    CHECK(ma.s11[0].imag() == doctest::Approx(-0.35355339059327373).epsilon(1e-14));

    const auto ri = parse_touchstone_s1p("# HZ S RI R 50\n2e9 0.1 0.2\n");
    CHECK(ri.frequency_hz[0] == 2e9);
    CHECK(ri.s11[0] == Complex(0.1, 0.2));
    CHECK(ri.options.format == TouchstoneFormat::RI);

    const auto db = parse_touchstone_s1p("# MHz S DB R 75\n100 -20 90\n");
    CHECK(db.frequency_hz[0] == doctest::Approx(1e8));
    CHECK(std::abs(db.s11[0] - Complex(0.0, 0.1)) < 1e-15);
    CHECK(db.options.reference_ohms == 75.0);
    CHECK(db.magnitude_db()[0] == doctest::Approx(-20.0));
}

TEST_CASE("defaults, comments and case") {
    const auto d = parse_touchstone_s1p("! only data\n1 0.25 180 ! trailing\n\n3 1 0\n");
    CHECK(d.options == TouchstoneOptions{});
    CHECK(d.frequency_hz == std::vector<double>{1e9, 3e9});
    CHECK(std::abs(d.s11[0] - Complex(-0.25, 0.0)) < 1e-15);

    const auto k = parse_touchstone_s1p("#  khz  s  ri  r 50\r\n1 0 0\r\n");
    CHECK(k.options.unit == FrequencyUnit::kHz);
    CHECK(k.frequency_hz[0] == 1e3);

    // Tokens in any order; a repeated option line before data is ignored.
    const auto o = parse_touchstone_s1p("# R 25 RI MHZ S\n# GHz S MA R 50\n2 0.1 0.1\n");
    CHECK(o.options.unit == FrequencyUnit::MHz);
    CHECK(o.options.reference_ohms == 25.0);
    CHECK(o.frequency_hz[0] == 2e6);
}

TEST_CASE("malformed corpus") {
    for (const auto& c : testing::malformed_corpus()) {
        CAPTURE(c.name);
        try {
            (void)parse_touchstone_s1p(c.text);
            FAIL("expected an error");
        } catch (const TouchstoneError& e) {
            CHECK(e.kind() == c.kind);
            CHECK(e.line() == c.line);
            CHECK(std::string(e.what()).find("line " + std::to_string(c.line)) != std::string::npos);
        }
    }
}

TEST_CASE("round trip across formats and units") {
    const TouchstoneFormat fmts[] = {TouchstoneFormat::MA, TouchstoneFormat::DB, TouchstoneFormat::RI};
    const FrequencyUnit units[] = {FrequencyUnit::Hz, FrequencyUnit::kHz, FrequencyUnit::MHz, FrequencyUnit::GHz};
    std::uint64_t seed = 1;
    for (auto fmt : fmts)
        for (auto unit : units) {
            const TouchstoneOptions opt{unit, fmt, 50.0};
            const auto text0 = write_touchstone_s1p(testing::random_sweep(seed++, 30), opt);
            const auto p1 = parse_touchstone_s1p(text0);
            CHECK(p1.options == opt);
            const auto p2 = parse_touchstone_s1p(write_touchstone_s1p(p1, opt));
            CHECK(close(p1, p2, 1e-12));
            CHECK(p2.options == p1.options);
        }

    // Frequencies survive unit scaling exactly in the source unit.
    const auto g = parse_touchstone_s1p("# GHz S RI R 50\n0.01 0 0\n14 0 0\n");
    CHECK(g.frequency_hz == std::vector<double>{1e7, 1.4e10});
}

TEST_CASE("independent decoding of MA and DB rows") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> m(1e-3, 1.0), a(-180.0, 180.0);
    for (int i = 0; i < 100; ++i) {
        const double mag = m(rng), ang = a(rng);
        const std::string row = format_double(1.0 + i) + " " + format_double(mag) + " " + format_double(ang);
        const auto s = parse_touchstone_s1p("# GHz S MA R 50\n" + row + "\n");
        CHECK(std::abs(s.s11[0] - Complex(mag * std::cos(ang * kDeg), mag * std::sin(ang * kDeg))) < 1e-15);
        const double db = 20.0 * std::log10(mag);
        const auto d = parse_touchstone_s1p("# GHz S DB R 50\n1 " + format_double(db) + " " + format_double(ang) + "\n");
        CHECK(std::abs(std::abs(d.s11[0]) - mag) < 1e-13);
    }
}

TEST_CASE("file reading") {
    const auto dir = std::filesystem::temp_directory_path() / "sreldiag_ts_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / "a.s1p");
        f << "# MHz S RI R 50\n10 0.5 0\n20 0.25 0\n";
    }
    const auto s = read_touchstone_s1p(dir / "a.s1p");
    CHECK(s.grid().size() == 2);
    CHECK(s.magnitude_db()[1] == doctest::Approx(20.0 * std::log10(0.25)));
    CHECK_THROWS_AS(read_touchstone_s1p(dir / "missing.s1p"), std::runtime_error);
    std::filesystem::remove_all(dir);
}
