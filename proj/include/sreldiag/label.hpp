// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace sreldiag {

enum class Cause { Normal, Mechanical, Corrosion };

inline constexpr int kSeverityLevels = 3;
inline constexpr std::size_t kNumClasses = 7;
inline constexpr std::array<Cause, 2> kDefectCauses{Cause::Mechanical, Cause::Corrosion};

std::string_view cause_name(Cause c);
Cause parse_cause(std::string_view s);

/// Cause plus ordinal severity. Normal has severity 0; defects 1..3.
struct DefectLabel {
    Cause cause = Cause::Normal;
    int severity = 0;

    /// Throws InvalidArgument unless the cause/severity pairing is legal.
    void validate() const;

    /// Class index in Normal, M1, M2, M3, C1, C2, C3 order.
    std::size_t class_index() const;
    static DefectLabel from_class_index(std::size_t index);

    /// "Normal", "M1" ... "C3".
    std::string code() const;
    static DefectLabel from_code(std::string_view code);

    bool operator==(const DefectLabel&) const = default;
};

inline Cause cause_of_class(std::size_t class_index) {
    return DefectLabel::from_class_index(class_index).cause;
}

}  // namespace sreldiag
