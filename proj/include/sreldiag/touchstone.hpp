// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#pragma once

// Touchstone v1 one-port (.s1p) reader and writer.
//
// Accepted layout:
//   ! comment            (anywhere; also trailing on data lines)
//   # <unit> S <fmt> R <ohms>   option line, tokens case-insensitive, any order,
//                               omitted tokens default to "# GHz S MA R 50";
//                               option lines after the first are ignored
//   <freq> <v1> <v2>     one data row per frequency, strictly ascending
//
// Formats: MA (linear magnitude, angle in degrees), DB (20log10 magnitude,
// angle in degrees), RI (real, imaginary).

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sreldiag/rfsim.hpp"

namespace sreldiag {

enum class TouchstoneFormat { MA, DB, RI };
enum class FrequencyUnit { Hz, kHz, MHz, GHz };

std::string_view format_name(TouchstoneFormat f);
std::string_view unit_name(FrequencyUnit u);
double unit_scale(FrequencyUnit u);

struct TouchstoneOptions {
    FrequencyUnit unit = FrequencyUnit::GHz;
    TouchstoneFormat format = TouchstoneFormat::MA;
    double reference_ohms = 50.0;

    bool operator==(const TouchstoneOptions&) const = default;
};

struct OnePortSweep {
    std::vector<double> frequency_hz;
    std::vector<Complex> s11;
    TouchstoneOptions options;  // as declared in the source file

    std::size_t size() const { return frequency_hz.size(); }
    FrequencyGrid grid() const { return FrequencyGrid(frequency_hz); }
    std::vector<double> magnitude_db() const;
};

class TouchstoneError : public std::runtime_error {
public:
    enum class Kind {
        MalformedOptionLine,
        UnsupportedParameter,
        NonMonotoneFrequency,
        WrongColumnCount,
        BadNumber,
        EmptySweep,
    };

    TouchstoneError(Kind kind, std::size_t line, const std::string& detail);

    Kind kind() const { return kind_; }
    /// 1-based line number of the offending line (last line for EmptySweep).
    std::size_t line() const { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

std::string_view error_kind_name(TouchstoneError::Kind k);

OnePortSweep parse_touchstone_s1p(std::string_view text);
OnePortSweep read_touchstone_s1p(const std::filesystem::path& path);

/// Serializes with the given option line; numbers use shortest round-trip form.
std::string write_touchstone_s1p(const OnePortSweep& sweep, const TouchstoneOptions& options);

}  // namespace sreldiag
