// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nfchan/geometry.hpp"

namespace nfchan::jsonutil {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& context, const std::string& message) {
    throw std::runtime_error("scenario: " + context + ": " + message);
}

inline void check_keys(const json& j, const std::string& context, const std::set<std::string>& allowed) {
    if (!j.is_object()) fail(context, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) fail(context, "unknown field '" + it.key() + "'");
}

inline const json& require(const json& j, const std::string& context, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) fail(context, "missing required field '" + key + "'");
    return *it;
}

inline double require_number(const json& j, const std::string& context, const std::string& key) {
    const json& v = require(j, context, key);
    if (!v.is_number()) fail(context, "field '" + key + "' must be a number");
    return v.get<double>();
}

inline double optional_number(const json& j, const std::string& context, const std::string& key, double fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) fail(context, "field '" + key + "' must be a number");
    return it->get<double>();
}

inline Point3 require_vec3(const json& j, const std::string& context, const std::string& key) {
    const json& v = require(j, context, key);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
        fail(context, "field '" + key + "' must be an array of 3 numbers");
    return Point3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

inline Point3 optional_vec3(const json& j, const std::string& context, const std::string& key,
                            const Point3& fallback) {
    if (j.find(key) == j.end()) return fallback;
    return require_vec3(j, context, key);
}

inline std::vector<double> require_number_array(const json& j, const std::string& context, const std::string& key) {
    const json& v = require(j, context, key);
    if (!v.is_array() || v.empty()) fail(context, "field '" + key + "' must be a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) fail(context, "field '" + key + "' must contain only numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

inline std::vector<double> optional_number_array(const json& j, const std::string& context, const std::string& key,
                                                 std::vector<double> fallback) {
    if (j.find(key) == j.end()) return fallback;
    return require_number_array(j, context, key);
}

}  // namespace nfchan::jsonutil
