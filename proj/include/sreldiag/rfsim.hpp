// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#pragma once

// Two-port transmission-line modelling and synthesis of reflection-coefficient
// sweeps for normal, cracked and corroded interconnects.

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "sreldiag/label.hpp"

namespace sreldiag {

using Complex = std::complex<double>;

/// Thrown when a reflection/S11 ratio has a vanishing denominator.
class DegenerateDenominator : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Strictly increasing list of positive frequencies in Hz.
class FrequencyGrid {
public:
    explicit FrequencyGrid(std::vector<double> points_hz);

    /// Evenly spaced grid including both end points.
    static FrequencyGrid linear(double f_min_hz, double f_max_hz, std::size_t n);
    /// 201 points, 10 MHz to 14 GHz.
    static FrequencyGrid standard();

    std::size_t size() const { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i]; }
    std::span<const double> points() const { return points_; }
    double front() const { return points_.front(); }
    double back() const { return points_.back(); }

    /// Index of the bin closest to f (lower index on exact ties).
    std::size_t nearest_index(double f_hz) const;

    /// Stable 64-bit FNV-1a digest over the IEEE bit patterns.
    std::uint64_t hash() const;

    /// Same length and every point equal within `rel_tol` relative.
    bool matches(std::span<const double> other_hz, double rel_tol = 1e-9) const;

    bool operator==(const FrequencyGrid&) const = default;

private:
    std::vector<double> points_;
};

using GridPtr = std::shared_ptr<const FrequencyGrid>;

/// Chain (ABCD) matrix of a two-port; port 1 is on the left.
struct AbcdMatrix {
    Complex a{1.0, 0.0};
    Complex b{0.0, 0.0};
    Complex c{0.0, 0.0};
    Complex d{1.0, 0.0};

    static AbcdMatrix identity() { return {}; }

    AbcdMatrix operator*(const AbcdMatrix& rhs) const {
        return {a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d,
                c * rhs.a + d * rhs.c, c * rhs.b + d * rhs.d};
    }
    Complex determinant() const { return a * d - b * c; }
};

/// Per-unit-length RLGC description of a uniform line segment.
/// Effective resistance at frequency f is r + skin_coeff * sqrt(f).
struct LineSection {
    double r = 60.0;            // ohm/m
    double l = 3.6e-7;          // H/m
    double g = 0.0;             // S/m
    double c = 1.0e-10;         // F/m
    double length = 0.03;       // m
    double skin_coeff = 0.05;   // ohm/(m*sqrt(Hz))

    void validate() const;
    /// Lossless characteristic impedance sqrt(l/c).
    double nominal_impedance() const;
};

/// (zl - z0) / (zl + z0); an infinite zl (open circuit) gives exactly 1.
Complex reflection_coefficient(Complex zl, Complex z0);

/// Telegrapher two-port of one uniform segment. Rejects Re(gamma*len) > 700.
AbcdMatrix segment_abcd(const LineSection& section, double f_hz);

/// Series impedance element [[1, z], [0, 1]].
AbcdMatrix lumped_series_abcd(Complex z);

/// Shunt admittance element [[1, 0], [y, 1]].
AbcdMatrix lumped_shunt_abcd(Complex y);

/// Left-to-right product; element 0 sits at port 1.
AbcdMatrix cascade(std::span<const AbcdMatrix> chain);

/// Input reflection of the two-port with port 2 terminated in `zref_ohm`.
Complex abcd_to_s11(const AbcdMatrix& m, double zref_ohm);

/// One sample's reflection magnitude in dB on a frequency grid.
struct SignalPattern {
    GridPtr grid;
    std::vector<double> magnitude_db;

    std::size_t size() const { return magnitude_db.size(); }
    bool operator==(const SignalPattern& o) const {
        return magnitude_db == o.magnitude_db && (grid == o.grid || (grid && o.grid && *grid == *o.grid));
    }
};

/// Physical realisation of one labelled specimen.
struct DefectScenario {
    DefectLabel label;
    int crack_count = 0;
    double corrosion_fraction = 0.0;
    std::uint64_t variation_seed = 0;

    void validate() const;

    /// Cracks per mechanical level: 1, 3, 5.
    static int cracks_for_level(int severity);
    /// Corrosion fraction band (lo, hi] for a corrosion level.
    static std::pair<double, double> corrosion_band(int severity);

    /// Draws a scenario for `label`: crack count by level, corrosion
    /// fraction uniform in its band, all from `seed`.
    static DefectScenario sample(const DefectLabel& label, std::uint64_t seed);
};

struct SynthesisConfig {
    LineSection nominal{};
    int segments = 20;
    double crack_resistance = 0.05;    // ohm, in series
    double crack_capacitance = 5e-12;  // F, in series
    double corrosion_kappa = 4.0;      // r, skin_coeff scale (1 + kappa * fraction)
    double variation_sigma = 0.03;     // relative, truncated at +-3 sigma
    double reference_impedance = 50.0;

    void validate() const;
};

/// Builds the segmented line (with cracks and corrosion applied) and returns
/// 20*log10|S11| on `grid`. Pure function of its arguments.
SignalPattern synthesize_pattern(const DefectScenario& scenario, const GridPtr& grid,
                                 const SynthesisConfig& config, std::uint64_t rng_seed);

/// Adds iid N(0, sigma_db^2) to each dB value.
SignalPattern inject_noise(const SignalPattern& pattern, double sigma_db, std::uint64_t seed);

/// In-place variant over a raw dB vector.
void add_gaussian_noise(std::span<double> values_db, double sigma_db, std::uint64_t seed);

/// 20*log10|s|, floored at -300 dB.
double to_db(Complex s);

}  // namespace sreldiag
