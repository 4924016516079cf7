// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include "sreldiag/touchstone.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sreldiag/common.hpp"

namespace sreldiag {

std::string_view format_name(TouchstoneFormat f) {
    switch (f) {
        case TouchstoneFormat::MA: return "MA";
        case TouchstoneFormat::DB: return "DB";
        case TouchstoneFormat::RI: return "RI";
    }
    return "?";
}

std::string_view unit_name(FrequencyUnit u) {
    switch (u) {
        case FrequencyUnit::Hz: return "HZ";
        case FrequencyUnit::kHz: return "KHZ";
        case FrequencyUnit::MHz: return "MHZ";
        case FrequencyUnit::GHz: return "GHZ";
    }
    return "?";
}

double unit_scale(FrequencyUnit u) {
    switch (u) {
        case FrequencyUnit::Hz: return 1.0;
        case FrequencyUnit::kHz: return 1e3;
        case FrequencyUnit::MHz: return 1e6;
        case FrequencyUnit::GHz: return 1e9;
    }
    return 1.0;
}

std::string_view error_kind_name(TouchstoneError::Kind k) {
    using K = TouchstoneError::Kind;
    switch (k) {
        case K::MalformedOptionLine: return "malformed option line";
        case K::UnsupportedParameter: return "unsupported parameter type";
        case K::NonMonotoneFrequency: return "non-monotone frequency";
        case K::WrongColumnCount: return "wrong column count";
        case K::BadNumber: return "bad number";
        case K::EmptySweep: return "empty sweep";
    }
    return "?";
}

TouchstoneError::TouchstoneError(Kind kind, std::size_t line, const std::string& detail)
    : std::runtime_error("touchstone line " + std::to_string(line) + ": " + std::string(error_kind_name(kind)) +
                         (detail.empty() ? "" : ": " + detail)),
      kind_(kind),
      line_(line) {}

std::vector<double> OnePortSweep::magnitude_db() const {
    std::vector<double> out(s11.size());
    std::transform(s11.begin(), s11.end(), out.begin(), [](Complex s) { return to_db(s); });
    return out;
}

namespace {

std::vector<std::string_view> tokenize(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        const std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

std::string upper(std::string_view s) {
    std::string out(s);
    for (char& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return out;
}

TouchstoneOptions parse_option_line(std::string_view body, std::size_t line_no) {
    using K = TouchstoneError::Kind;
    TouchstoneOptions opt;
    const auto toks = tokenize(body);
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const std::string t = upper(toks[i]);
        if (t == "HZ") opt.unit = FrequencyUnit::Hz;
        else if (t == "KHZ") opt.unit = FrequencyUnit::kHz;
        else if (t == "MHZ") opt.unit = FrequencyUnit::MHz;
        else if (t == "GHZ") opt.unit = FrequencyUnit::GHz;
        else if (t == "MA") opt.format = TouchstoneFormat::MA;
        else if (t == "DB") opt.format = TouchstoneFormat::DB;
        else if (t == "RI") opt.format = TouchstoneFormat::RI;
        else if (t == "S") continue;
        else if (t == "Y" || t == "Z" || t == "H" || t == "G")
            throw TouchstoneError(K::UnsupportedParameter, line_no, "only S parameters are supported, got " + t);
        else if (t == "R") {
            if (i + 1 >= toks.size()) throw TouchstoneError(K::MalformedOptionLine, line_no, "R without a value");
            double r = 0;
            if (!parse_double(toks[i + 1], r) || !(r > 0.0) || !std::isfinite(r))
                throw TouchstoneError(K::MalformedOptionLine, line_no,
                                      "reference impedance '" + std::string(toks[i + 1]) + "' is not a positive number");
            opt.reference_ohms = r;
            ++i;
        } else {
            throw TouchstoneError(K::MalformedOptionLine, line_no, "unknown token '" + std::string(toks[i]) + "'");
        }
    }
    return opt;
}

Complex decode_pair(TouchstoneFormat fmt, double v1, double v2) {
    constexpr double deg = std::numbers::pi / 180.0;
    switch (fmt) {
        case TouchstoneFormat::MA: return std::polar(v1, v2 * deg);
        case TouchstoneFormat::DB: return std::polar(std::pow(10.0, v1 / 20.0), v2 * deg);
        case TouchstoneFormat::RI: return {v1, v2};
    }
    return {};
}

}  // namespace

OnePortSweep parse_touchstone_s1p(std::string_view text) {
    using K = TouchstoneError::Kind;
    OnePortSweep sweep;
    bool have_options = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        if (auto bang = line.find('!'); bang != std::string_view::npos) line = line.substr(0, bang);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) continue;
        line = line.substr(first);

        if (line.front() == '#') {
            if (!sweep.frequency_hz.empty())
                throw TouchstoneError(K::MalformedOptionLine, line_no, "option line after network data");
            if (!have_options) {
                sweep.options = parse_option_line(line.substr(1), line_no);
                have_options = true;
            }
            continue;
        }

        const auto toks = tokenize(line);
        if (toks.size() != 3)
            throw TouchstoneError(K::WrongColumnCount, line_no,
                                  "expected 3 values for a one-port row, found " + std::to_string(toks.size()));
        double vals[3];
        for (int k = 0; k < 3; ++k)
            if (!parse_double(toks[k], vals[k]) || !std::isfinite(vals[k]))
                throw TouchstoneError(K::BadNumber, line_no, "cannot parse '" + std::string(toks[k]) + "'");
        const double f = vals[0] * unit_scale(sweep.options.unit);
        if (f < 0.0) throw TouchstoneError(K::NonMonotoneFrequency, line_no, "negative frequency");
        if (!sweep.frequency_hz.empty() && !(f > sweep.frequency_hz.back()))
            throw TouchstoneError(K::NonMonotoneFrequency, line_no,
                                  "frequency " + std::string(toks[0]) + " does not exceed the previous row");
        sweep.frequency_hz.push_back(f);
        sweep.s11.push_back(decode_pair(sweep.options.format, vals[1], vals[2]));
    }
    if (sweep.frequency_hz.empty()) throw TouchstoneError(K::EmptySweep, line_no, "no network data rows");
    return sweep;
}

OnePortSweep read_touchstone_s1p(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open touchstone file '" + path.string() + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_touchstone_s1p(ss.str());
}

std::string write_touchstone_s1p(const OnePortSweep& sweep, const TouchstoneOptions& options) {
    if (sweep.frequency_hz.size() != sweep.s11.size()) throw InvalidArgument("sweep frequency/value length mismatch");
    std::string out = "! one-port sweep\n# ";
    out += unit_name(options.unit);
    out += " S ";
    out += format_name(options.format);
    out += " R " + format_double(options.reference_ohms) + "\n";
    const double scale = unit_scale(options.unit);
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        const Complex s = sweep.s11[i];
        double v1 = 0, v2 = 0;
        switch (options.format) {
            case TouchstoneFormat::RI: v1 = s.real(); v2 = s.imag(); break;
            case TouchstoneFormat::MA: v1 = std::abs(s); v2 = std::arg(s) * 180.0 / std::numbers::pi; break;
            case TouchstoneFormat::DB: v1 = 20.0 * std::log10(std::abs(s)); v2 = std::arg(s) * 180.0 / std::numbers::pi; break;
        }
        out += format_double(sweep.frequency_hz[i] / scale) + ' ' + format_double(v1) + ' ' + format_double(v2) + '\n';
    }
    return out;
}

}  // namespace sreldiag
