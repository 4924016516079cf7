// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include "sreldiag/rfsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "sreldiag/common.hpp"

namespace sreldiag {

FrequencyGrid::FrequencyGrid(std::vector<double> points_hz) : points_(std::move(points_hz)) {
    if (points_.size() < 2) throw InvalidArgument("frequency grid needs at least 2 points");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i]) || points_[i] <= 0.0)
            throw InvalidArgument("frequency grid point " + std::to_string(i) + " is not finite and positive");
        if (i > 0 && !(points_[i] > points_[i - 1]))
            throw InvalidArgument("frequency grid must be strictly increasing (index " + std::to_string(i) + ")");
    }
}

FrequencyGrid FrequencyGrid::linear(double f_min_hz, double f_max_hz, std::size_t n) {
    if (n < 2) throw InvalidArgument("frequency grid needs at least 2 points");
    std::vector<double> pts(n);
    const double step = (f_max_hz - f_min_hz) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) pts[i] = f_min_hz + step * static_cast<double>(i);
    pts.back() = f_max_hz;
    return FrequencyGrid(std::move(pts));
}

FrequencyGrid FrequencyGrid::standard() { return linear(10e6, 14e9, 201); }

std::size_t FrequencyGrid::nearest_index(double f_hz) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), f_hz);
    if (it == points_.begin()) return 0;
    if (it == points_.end()) return points_.size() - 1;
    const auto hi = static_cast<std::size_t>(it - points_.begin());
    return (f_hz - points_[hi - 1] <= points_[hi] - f_hz) ? hi - 1 : hi;
}

std::uint64_t FrequencyGrid::hash() const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (double p : points_) {
        auto bits = std::bit_cast<std::uint64_t>(p);
        for (int k = 0; k < 8; ++k) {
            h ^= (bits >> (8 * k)) & 0xFFu;
            h *= 0x100000001B3ULL;
        }
    }
    return h;
}

bool FrequencyGrid::matches(std::span<const double> other_hz, double rel_tol) const {
    if (other_hz.size() != points_.size()) return false;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (std::abs(other_hz[i] - points_[i]) > rel_tol * std::abs(points_[i])) return false;
    }
    return true;
}

void LineSection::validate() const {
    auto ok = [](double v) { return std::isfinite(v); };
    if (!ok(r) || !ok(l) || !ok(g) || !ok(c) || !ok(length) || !ok(skin_coeff))
        throw InvalidArgument("line section has non-finite parameters");
    if (length < 0.0) throw InvalidArgument("line section length must be >= 0");
    if (l <= 0.0 || c <= 0.0) throw InvalidArgument("line section l and c must be > 0");
    if (r < 0.0 || g < 0.0 || skin_coeff < 0.0)
        throw InvalidArgument("line section r, g and skin_coeff must be >= 0");
}

double LineSection::nominal_impedance() const { return std::sqrt(l / c); }

Complex reflection_coefficient(Complex zl, Complex z0) {
    if (std::isinf(zl.real()) || std::isinf(zl.imag())) return {1.0, 0.0};  // open circuit
    const Complex den = zl + z0;
    if (std::abs(den) < 1e-15) throw DegenerateDenominator("reflection coefficient: |zl + z0| < 1e-15");
    return (zl - z0) / den;
}

AbcdMatrix segment_abcd(const LineSection& s, double f_hz) {
    if (!(f_hz > 0.0) || !std::isfinite(f_hz)) throw InvalidArgument("segment_abcd: frequency must be > 0");
    s.validate();
    const double w = 2.0 * std::numbers::pi * f_hz;
    const Complex z(s.r + s.skin_coeff * std::sqrt(f_hz), w * s.l);
    const Complex y(s.g, w * s.c);
    const Complex gamma = std::sqrt(z * y);
    const Complex zc = std::sqrt(z / y);
    const Complex gl = gamma * s.length;
    if (gl.real() > 700.0) throw std::overflow_error("segment_abcd: attenuation exponent exceeds 700");
    const Complex ch = std::cosh(gl);
    const Complex sh = std::sinh(gl);
    return {ch, zc * sh, sh / zc, ch};
}

AbcdMatrix lumped_series_abcd(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw InvalidArgument("series impedance must be finite");
    return {Complex(1.0), z, Complex(0.0), Complex(1.0)};
}

AbcdMatrix lumped_shunt_abcd(Complex y) {
    if (!std::isfinite(y.real()) || !std::isfinite(y.imag()))
        throw InvalidArgument("shunt admittance must be finite");
    return {Complex(1.0), Complex(0.0), y, Complex(1.0)};
}

AbcdMatrix cascade(std::span<const AbcdMatrix> chain) {
    if (chain.empty()) throw InvalidArgument("cascade of an empty chain");
    AbcdMatrix acc = chain.front();
    for (std::size_t i = 1; i < chain.size(); ++i) acc = acc * chain[i];
    return acc;
}

Complex abcd_to_s11(const AbcdMatrix& m, double zref) {
    if (!(zref > 0.0)) throw InvalidArgument("reference impedance must be > 0");
    const Complex num = m.a + m.b / zref - m.c * zref - m.d;
    const Complex den = m.a + m.b / zref + m.c * zref + m.d;
    if (std::abs(den) < 1e-15) throw DegenerateDenominator("abcd_to_s11: vanishing denominator");
    return num / den;
}

double to_db(Complex s) { return 20.0 * std::log10(std::max(std::abs(s), 1e-15)); }

void DefectScenario::validate() const {
    label.validate();
    if (crack_count < 0) throw InvalidArgument("crack_count must be >= 0");
    if (!(corrosion_fraction >= 0.0 && corrosion_fraction <= 1.0))
        throw InvalidArgument("corrosion_fraction must be in [0, 1]");
    const bool mech = label.cause == Cause::Mechanical;
    const bool corr = label.cause == Cause::Corrosion;
    if ((crack_count > 0) != mech) throw InvalidArgument("crack_count > 0 exactly for mechanical defects");
    if ((corrosion_fraction > 0.0) != corr)
        throw InvalidArgument("corrosion_fraction > 0 exactly for corrosion defects");
}

int DefectScenario::cracks_for_level(int severity) {
    switch (severity) {
        case 1: return 1;
        case 2: return 3;
        case 3: return 5;
        default: throw InvalidArgument("mechanical severity must be 1..3");
    }
}

std::pair<double, double> DefectScenario::corrosion_band(int severity) {
    switch (severity) {
        case 1: return {0.05, 0.30};
        case 2: return {0.30, 0.60};
        case 3: return {0.60, 1.00};
        default: throw InvalidArgument("corrosion severity must be 1..3");
    }
}

DefectScenario DefectScenario::sample(const DefectLabel& label, std::uint64_t seed) {
    label.validate();
    DefectScenario s;
    s.label = label;
    s.variation_seed = derive_seed(seed, 1);
    if (label.cause == Cause::Mechanical) {
        s.crack_count = cracks_for_level(label.severity);
    } else if (label.cause == Cause::Corrosion) {
        const auto [lo, hi] = corrosion_band(label.severity);
        Rng rng(derive_seed(seed, 2));
        // (lo, hi]: reflect the half-open [0, 1) draw.
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        s.corrosion_fraction = hi - (hi - lo) * u;
    }
    return s;
}

void SynthesisConfig::validate() const {
    nominal.validate();
    if (segments < 1) throw InvalidArgument("segments must be >= 1");
    if (crack_resistance < 0.0 || !(crack_capacitance > 0.0))
        throw InvalidArgument("crack element needs R >= 0 and C > 0");
    if (corrosion_kappa < 0.0) throw InvalidArgument("corrosion kappa must be >= 0");
    if (variation_sigma < 0.0 || variation_sigma >= 1.0 / 3.0)
        throw InvalidArgument("variation sigma must be in [0, 1/3)");
    if (!(reference_impedance > 0.0)) throw InvalidArgument("reference impedance must be > 0");
}

namespace {

double truncated_normal(Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    for (;;) {
        const double z = n(rng);
        if (std::abs(z) <= 3.0) return z;
    }
}

}  // namespace

SignalPattern synthesize_pattern(const DefectScenario& scenario, const GridPtr& grid,
                                 const SynthesisConfig& config, std::uint64_t rng_seed) {
    if (!grid) throw InvalidArgument("synthesize_pattern: null grid");
    scenario.validate();
    config.validate();
    if (scenario.crack_count > config.segments - 1)
        throw InvalidArgument("more cracks than interior segment boundaries");

    LineSection line = config.nominal;
    {
        Rng rng(rng_seed);
        const double sigma = config.variation_sigma;
        for (double* p : {&line.r, &line.l, &line.g, &line.c, &line.skin_coeff})
            *p *= 1.0 + sigma * truncated_normal(rng);
    }
    const double corrosion_scale = 1.0 + config.corrosion_kappa * scenario.corrosion_fraction;
    line.r *= corrosion_scale;
    line.skin_coeff *= corrosion_scale;
    line.length = config.nominal.length / config.segments;

    // Crack k sits after segment crack_after[k] (0-based), never at the ports.
    std::vector<bool> crack_after(static_cast<std::size_t>(config.segments), false);
    {
        std::vector<int> boundaries(static_cast<std::size_t>(config.segments - 1));
        std::iota(boundaries.begin(), boundaries.end(), 0);
        Rng rng(scenario.variation_seed);
        for (int k = 0; k < scenario.crack_count; ++k) {
            std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(k), boundaries.size() - 1);
            std::swap(boundaries[static_cast<std::size_t>(k)], boundaries[pick(rng)]);
            crack_after[static_cast<std::size_t>(boundaries[static_cast<std::size_t>(k)])] = true;
        }
    }

    SignalPattern out{grid, std::vector<double>(grid->size())};
    std::vector<AbcdMatrix> chain;
    chain.reserve(static_cast<std::size_t>(config.segments + scenario.crack_count));
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double f = (*grid)[i];
        const AbcdMatrix seg = segment_abcd(line, f);
        const Complex z_crack(config.crack_resistance,
                              -1.0 / (2.0 * std::numbers::pi * f * config.crack_capacitance));
        const AbcdMatrix crack = lumped_series_abcd(z_crack);
        chain.clear();
        for (std::size_t s = 0; s < crack_after.size(); ++s) {
            chain.push_back(seg);
            if (crack_after[s]) chain.push_back(crack);
        }
        out.magnitude_db[i] = to_db(abcd_to_s11(cascade(chain), config.reference_impedance));
    }
    return out;
}

void add_gaussian_noise(std::span<double> values_db, double sigma_db, std::uint64_t seed) {
    if (!(sigma_db >= 0.0)) throw InvalidArgument("noise sigma must be >= 0");
    if (sigma_db == 0.0) return;
    Rng rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    for (double& v : values_db) v += sigma_db * n(rng);
}

SignalPattern inject_noise(const SignalPattern& pattern, double sigma_db, std::uint64_t seed) {
    SignalPattern out = pattern;
    add_gaussian_noise(out.magnitude_db, sigma_db, seed);
    return out;
}

}  // namespace sreldiag
