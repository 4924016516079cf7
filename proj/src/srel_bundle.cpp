// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include <algorithm>
#include <cctype>

#include "sreldiag/json_io.hpp"
#include "sreldiag/srel.hpp"

namespace sreldiag {

namespace {

std::string scorer_file(Cause cause, int level) {
    if (level == 0) return "normal.bin";
    std::string name(cause_name(cause));
    for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return name + "_" + std::to_string(level) + ".bin";
}

const Network& network_of(const std::shared_ptr<const BinaryScorer>& s) {
    const auto* ns = dynamic_cast<const NetworkScorer*>(s.get());
    if (!ns) throw BundleError("only network scorers can be saved");
    return ns->network();
}

std::shared_ptr<const BinaryScorer> load_scorer(const std::filesystem::path& path) {
    try {
        return std::make_shared<NetworkScorer>(load_network(path));
    } catch (const std::runtime_error& e) {
        throw BundleError(e.what());
    }
}

}  // namespace

void save_srel_bundle(const SrelModel& model, const std::filesystem::path& dir) {
    model.validate();
    if (!model.grid) throw BundleError("SREL model has no grid");
    std::filesystem::create_directories(dir);
    Json body;
    body["grid"] = grid_to_json(*model.grid);
    body["scaler"] = scaler_to_json(model.scaler);
    body["param_count"] = model.param_count();
    Json scorers = Json::array();
    auto add = [&](Cause cause, int level, const std::shared_ptr<const BinaryScorer>& s) {
        const auto file = scorer_file(cause, level);
        save_network(network_of(s), dir / file);
        scorers.push_back({{"cause", std::string(cause_name(cause))}, {"level", level}, {"file", file}});
    };
    add(Cause::Normal, 0, model.normal_detector);
    for (const auto& l : model.ladders)
        for (std::size_t k = 0; k < l.scorers.size(); ++k) add(l.cause, static_cast<int>(k + 1), l.scorers[k]);
    body["scorers"] = scorers;
    write_bundle_manifest(dir, "srel", body);
}

SrelModel load_srel_bundle(const std::filesystem::path& dir) {
    const Json j = read_bundle_manifest(dir, "srel");
    SrelModel m;
    m.grid = grid_from_json(j.at("grid"));
    m.scaler = scaler_from_json(j.at("scaler"));
    try {
        for (const auto& e : j.at("scorers")) {
            const Cause cause = parse_cause(e.at("cause").get<std::string>());
            const int level = e.at("level").get<int>();
            auto scorer = load_scorer(dir / e.at("file").get<std::string>());
            if (level == 0) {
                if (m.normal_detector) throw BundleError("manifest lists two normal detectors");
                m.normal_detector = std::move(scorer);
                continue;
            }
            auto it = std::find_if(m.ladders.begin(), m.ladders.end(), [&](const auto& l) { return l.cause == cause; });
            if (it == m.ladders.end()) it = m.ladders.insert(m.ladders.end(), SeverityLadder{cause, {}});
            if (static_cast<int>(it->scorers.size()) + 1 != level)
                throw BundleError("ladder levels for " + std::string(cause_name(cause)) + " are out of order");
            it->scorers.push_back(std::move(scorer));
        }
    } catch (const Json::exception& e) {
        throw BundleError(std::string("bad scorer list: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw BundleError(std::string("bad scorer list: ") + e.what());
    }
    try {
        m.validate();
    } catch (const InvalidArgument& e) {
        throw BundleError(std::string("inconsistent SREL bundle: ") + e.what());
    }
    return m;
}

}  // namespace sreldiag
