// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include "sreldiag/common.hpp"

#include <charconv>
#include <system_error>

namespace sreldiag {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

bool parse_double(std::string_view text, double& out) {
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc{} && res.ptr == text.data() + text.size();
}

}  // namespace sreldiag
