// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include "sreldiag/json_io.hpp"

#include <cstdio>
#include <fstream>

namespace sreldiag {

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

Json grid_to_json(const FrequencyGrid& grid) {
    Json j;
    j["points_hz"] = std::vector<double>(grid.points().begin(), grid.points().end());
    j["hash"] = hex64(grid.hash());
    return j;
}

GridPtr grid_from_json(const Json& j) {
    try {
        auto grid = std::make_shared<const FrequencyGrid>(j.at("points_hz").get<std::vector<double>>());
        if (j.contains("hash") && j.at("hash").get<std::string>() != hex64(grid->hash()))
            throw BundleError("grid hash does not match the stored frequencies");
        return grid;
    } catch (const Json::exception& e) {
        throw BundleError(std::string("bad grid record: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw BundleError(std::string("bad grid record: ") + e.what());
    }
}

Json scaler_to_json(const Scaler& s) {
    Json j;
    j["mean"] = s.mean;
    j["stddev"] = s.stddev;
    return j;
}

Scaler scaler_from_json(const Json& j) {
    try {
        Scaler s{j.at("mean").get<std::vector<double>>(), j.at("stddev").get<std::vector<double>>()};
        if (s.mean.size() != s.stddev.size()) throw BundleError("scaler mean/stddev lengths differ");
        return s;
    } catch (const Json::exception& e) {
        throw BundleError(std::string("bad scaler record: ") + e.what());
    }
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path.string() + "'");
    try {
        return Json::parse(f);
    } catch (const Json::exception& e) {
        throw std::runtime_error("'" + path.string() + "': " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << j.dump(2) << '\n';
    if (!f) throw std::runtime_error("write to '" + path.string() + "' failed");
}

void write_bundle_manifest(const std::filesystem::path& dir, const std::string& method, const Json& body) {
    std::filesystem::create_directories(dir);
    Json j;
    j["format"] = kBundleFormat;
    j["version"] = kBundleVersion;
    j["method"] = method;
    for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
    write_json_file(dir / "manifest.json", j);
}

Json read_bundle_manifest(const std::filesystem::path& dir, const std::string& method) {
    const auto path = dir / "manifest.json";
    if (!std::filesystem::exists(path)) throw BundleError("'" + dir.string() + "' is not a model bundle");
    Json j;
    try {
        j = read_json_file(path);
    } catch (const std::runtime_error& e) {
        throw BundleError(e.what());
    }
    if (j.value("format", std::string{}) != kBundleFormat) throw BundleError("manifest has an unknown format tag");
    if (j.value("version", 0) != kBundleVersion) throw BundleError("unsupported bundle version");
    if (!method.empty() && j.value("method", std::string{}) != method)
        throw BundleError("bundle holds a '" + j.value("method", std::string{}) + "' model, expected '" + method + "'");
    return j;
}

}  // namespace sreldiag
