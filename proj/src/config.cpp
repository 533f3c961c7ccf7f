// SPDX-License-Identifier: Apache-2.0
#include "swarmarray/config.hpp"

#include <json.hpp>
#include <optional>
#include <set>

#include "swarmarray/io.hpp"

namespace swarmarray {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw ConfigError("unknown key '" + where + "." + key + "'");
    }
}

template <class T>
std::optional<T> get(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("'" + where + "." + key + "' has the wrong type");
    }
}

}  // namespace

RunConfig default_run_config() {
    RunConfig rc;
    rc.swarm = make_swarm_config(Frequency(300e6), UavPlatform::reference(), 2);
    rc.connector = catalog_entry(stage_catalog(), StageId::final_design).design;
    return rc;
}

RunConfig parse_run_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed configuration: ") + e.what());
    }
    reject_unknown(doc, "<root>", {"platform", "array", "connector", "jitter"});
    RunConfig rc = default_run_config();

    UavPlatform platform = UavPlatform::reference();
    if (doc.contains("platform")) {
        const auto& p = doc["platform"];
        reject_unknown(p, "platform", {"body_length_m", "propeller_diameter_m", "max_elements"});
        if (auto v = get<double>(p, "platform", "body_length_m")) platform.body_length = *v;
        if (auto v = get<double>(p, "platform", "propeller_diameter_m")) platform.propeller_diameter = *v;
        if (auto v = get<int>(p, "platform", "max_elements")) platform.max_elements = *v;
        try {
            platform.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("platform: ") + e.what());
        }
    }

    json a = doc.contains("array") ? doc["array"] : json::object();
    reject_unknown(a, "array",
                   {"frequency_hz", "n_uavs", "elements_per_uav", "element_spacing_m", "uav_spacing_m", "steer_deg",
                    "driven_length_m", "reflector_length_m", "reflector_separation_m", "rod_radius_m"});
    const double hz = get<double>(a, "array", "frequency_hz").value_or(300e6);
    const int n = get<int>(a, "array", "n_uavs").value_or(2);
    if (!(hz > 0.0)) throw ConfigError("array.frequency_hz must be positive");
    if (n < 1) throw ConfigError("array.n_uavs must be at least 1");
    try {
        rc.swarm = make_swarm_config(Frequency(hz), platform, n);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("array: ") + e.what());
    }
    if (auto v = get<int>(a, "array", "elements_per_uav")) rc.swarm.elements_per_uav = *v;
    if (auto v = get<double>(a, "array", "element_spacing_m")) rc.swarm.element_spacing = *v;
    if (auto v = get<double>(a, "array", "uav_spacing_m")) rc.swarm.uav_spacing = *v;
    rc.steer_deg = get<double>(a, "array", "steer_deg").value_or(0.0);
    auto& el = rc.swarm.element;
    if (auto v = get<double>(a, "array", "driven_length_m")) el.driven_length = *v;
    if (auto v = get<double>(a, "array", "reflector_length_m")) el.reflector_length = *v;
    if (auto v = get<double>(a, "array", "reflector_separation_m")) el.separation = *v;
    if (auto v = get<double>(a, "array", "rod_radius_m")) el.radius = *v;
    try {
        el.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("array element: ") + e.what());
    }

    if (doc.contains("connector")) {
        const auto& c = doc["connector"];
        reject_unknown(c, "connector", {"stage", "gap_m", "eps_r", "loss_tangent", "thickness_m"});
        if (auto v = get<std::string>(c, "connector", "stage")) {
            try {
                rc.connector = catalog_entry(stage_catalog(), stage_from_string(*v)).design;
            } catch (const std::exception& e) {
                throw ConfigError(std::string("connector.stage: ") + e.what());
            }
        }
        if (auto v = get<double>(c, "connector", "gap_m")) rc.connector.gap = *v;
        if (auto v = get<double>(c, "connector", "eps_r")) rc.connector.eps_r = *v;
        if (auto v = get<double>(c, "connector", "loss_tangent")) rc.connector.loss_tangent = *v;
        if (auto v = get<double>(c, "connector", "thickness_m")) rc.connector.thickness = *v;
        try {
            rc.connector.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("connector: ") + e.what());
        }
    }

    if (doc.contains("jitter")) {
        const auto& j = doc["jitter"];
        reject_unknown(j, "jitter", {"sigma_m", "phase_deg", "seed"});
        if (auto v = get<double>(j, "jitter", "sigma_m")) rc.jitter.sigma = *v;
        if (auto v = get<double>(j, "jitter", "phase_deg")) rc.jitter.phase_deg = *v;
        if (auto v = get<std::uint64_t>(j, "jitter", "seed")) rc.jitter.seed = *v;
        if (rc.jitter.sigma < 0.0 || rc.jitter.phase_deg < 0.0) throw ConfigError("jitter must be non-negative");
    }
    return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    try {
        return parse_run_config(read_text(path));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

}  // namespace swarmarray
