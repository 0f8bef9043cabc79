// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "renyi/distribution.hpp"
#include "renyi/errors.hpp"

namespace renyi {

/// Joint pmf wire schema:
///   { "x_size": K, "y_size": L, "pxy": [[... row-major by x ...]] }
inline JointDistribution joint_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("x_size") || !j.contains("y_size") || !j.contains("pxy"))
        throw ValidationError("joint JSON needs x_size, y_size, and pxy");
    const auto x_size = j.at("x_size").get<std::size_t>();
    const auto y_size = j.at("y_size").get<std::size_t>();
    const auto& rows = j.at("pxy");
    if (!rows.is_array() || rows.size() != x_size)
        throw ValidationError("pxy must have x_size rows");
    std::vector<std::vector<double>> raw(x_size);
    for (std::size_t x = 0; x < x_size; ++x) {
        if (!rows[x].is_array() || rows[x].size() != y_size)
            throw ValidationError("pxy rows must have y_size entries");
        raw[x] = rows[x].get<std::vector<double>>();
    }
    return validate_joint(raw);
}

inline nlohmann::json joint_to_json(const JointDistribution& joint) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t x = 0; x < joint.x_size(); ++x) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t y = 0; y < joint.y_size(); ++y) row.push_back(joint.prob(x, y));
        rows.push_back(row);
    }
    return nlohmann::json{{"x_size", joint.x_size()}, {"y_size", joint.y_size()}, {"pxy", rows}};
}

/// Mixture wire schema: { "weights": [...], "components": [joint, ...] }
inline MixtureSource mixture_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("weights") || !j.contains("components"))
        throw ValidationError("mixture JSON needs weights and components");
    std::vector<double> weights = j.at("weights").get<std::vector<double>>();
    std::vector<JointDistribution> components;
    for (const auto& c : j.at("components")) components.push_back(joint_from_json(c));
    return make_mixture(std::move(components), std::move(weights));
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open input file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
    return j;
}

inline JointDistribution load_joint(const std::string& path) {
    return joint_from_json(load_json_file(path));
}

inline MixtureSource load_mixture(const std::string& path) {
    return mixture_from_json(load_json_file(path));
}

} // namespace renyi
