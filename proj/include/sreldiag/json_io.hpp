// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sreldiag/dataset.hpp"
#include "sreldiag/rfsim.hpp"

namespace sreldiag {

using Json = nlohmann::ordered_json;

/// Problems reading or writing a model bundle directory.
class BundleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kBundleFormat = "sreldiag-bundle";
inline constexpr int kBundleVersion = 1;

std::string hex64(std::uint64_t v);

Json grid_to_json(const FrequencyGrid& grid);
GridPtr grid_from_json(const Json& j);
Json scaler_to_json(const Scaler& s);
Scaler scaler_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

/// Creates `dir` and writes manifest.json with format/version/method fields
/// prepended to `body`.
void write_bundle_manifest(const std::filesystem::path& dir, const std::string& method, const Json& body);
/// Reads manifest.json; checks format, version and (unless empty) method.
Json read_bundle_manifest(const std::filesystem::path& dir, const std::string& method = {});

}  // namespace sreldiag
