// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sreldiag {

/// Exit statuses: 0 success, 1 runtime failure, 2 usage or config error.
int run_cli(int argc, char** argv);
/// Same, with explicit arguments (argv[0] excluded) and streams.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sreldiag
