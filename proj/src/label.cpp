// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include "sreldiag/label.hpp"

#include "sreldiag/common.hpp"

namespace sreldiag {

std::string_view cause_name(Cause c) {
    switch (c) {
        case Cause::Normal: return "Normal";
        case Cause::Mechanical: return "Mechanical";
        case Cause::Corrosion: return "Corrosion";
    }
    return "?";
}

Cause parse_cause(std::string_view s) {
    if (s == "Normal") return Cause::Normal;
    if (s == "Mechanical") return Cause::Mechanical;
    if (s == "Corrosion") return Cause::Corrosion;
    throw InvalidArgument("unknown cause '" + std::string(s) + "'");
}

void DefectLabel::validate() const {
    if (cause == Cause::Normal) {
        if (severity != 0) throw InvalidArgument("Normal label must have severity 0");
    } else if (severity < 1 || severity > kSeverityLevels) {
        throw InvalidArgument("defect severity must be in 1.." + std::to_string(kSeverityLevels));
    }
}

std::size_t DefectLabel::class_index() const {
    validate();
    switch (cause) {
        case Cause::Normal: return 0;
        case Cause::Mechanical: return static_cast<std::size_t>(severity);
        case Cause::Corrosion: return static_cast<std::size_t>(kSeverityLevels + severity);
    }
    return 0;
}

DefectLabel DefectLabel::from_class_index(std::size_t index) {
    if (index == 0) return {Cause::Normal, 0};
    if (index <= 3) return {Cause::Mechanical, static_cast<int>(index)};
    if (index < kNumClasses) return {Cause::Corrosion, static_cast<int>(index - 3)};
    throw InvalidArgument("class index out of range: " + std::to_string(index));
}

std::string DefectLabel::code() const {
    validate();
    switch (cause) {
        case Cause::Normal: return "Normal";
        case Cause::Mechanical: return "M" + std::to_string(severity);
        case Cause::Corrosion: return "C" + std::to_string(severity);
    }
    return "?";
}

DefectLabel DefectLabel::from_code(std::string_view code) {
    if (code == "Normal") return {Cause::Normal, 0};
    if (code.size() == 2 && (code[0] == 'M' || code[0] == 'C') && code[1] >= '1' && code[1] <= '3') {
        return {code[0] == 'M' ? Cause::Mechanical : Cause::Corrosion, code[1] - '0'};
    }
    throw InvalidArgument("unknown class code '" + std::string(code) + "'");
}

}  // namespace sreldiag
