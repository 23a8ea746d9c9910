#pragma once

// Internal helpers shared by the file-format code. Not installed.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "autopower/errors.hpp"

namespace autopower::detail {

using json = nlohmann::json;

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError(path + ": cannot open file for writing");
    out << text;
    if (!out) throw InputError(path + ": write failed");
}

inline json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // nlohmann reports line/column in the message
        throw InputError(origin + ": " + e.what());
    }
}

inline const json& require(const json& j, const std::string& key, const std::string& ctx) {
    if (!j.is_object()) throw InputError(ctx + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw InputError(ctx + "." + key + ": missing field");
    return *it;
}

inline double require_number(const json& j, const std::string& key, const std::string& ctx) {
    const json& v = require(j, key, ctx);
    if (!v.is_number()) throw InputError(ctx + "." + key + ": expected a number");
    return v.get<double>();
}

inline std::int64_t require_int(const json& j, const std::string& key, const std::string& ctx) {
    const json& v = require(j, key, ctx);
    if (!v.is_number_integer()) throw InputError(ctx + "." + key + ": expected an integer");
    return v.get<std::int64_t>();
}

inline std::string require_string(const json& j, const std::string& key, const std::string& ctx) {
    const json& v = require(j, key, ctx);
    if (!v.is_string()) throw InputError(ctx + "." + key + ": expected a string");
    return v.get<std::string>();
}

inline const json& require_array(const json& j, const std::string& key, const std::string& ctx) {
    const json& v = require(j, key, ctx);
    if (!v.is_array()) throw InputError(ctx + "." + key + ": expected an array");
    return v;
}

inline const json& require_object(const json& j, const std::string& key, const std::string& ctx) {
    const json& v = require(j, key, ctx);
    if (!v.is_object()) throw InputError(ctx + "." + key + ": expected an object");
    return v;
}

inline void check_schema_version(const json& j, int expected, const std::string& ctx) {
    std::int64_t got = require_int(j, "schema_version", ctx);
    if (got != expected)
        throw InputError(ctx + ".schema_version: unknown version " + std::to_string(got) +
                         ", expected " + std::to_string(expected));
}

// Canonical serialization used everywhere: two-space indent, sorted keys
// (std::map-backed json), trailing newline. Byte-identical for equal data.
inline std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

inline json number_map_to_json(const std::map<std::string, double>& m) {
    json j = json::object();
    for (const auto& [k, v] : m) j[k] = v;
    return j;
}

inline std::map<std::string, double> number_map_from_json(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw InputError(ctx + ": expected an object");
    std::map<std::string, double> out;
    for (const auto& [k, v] : j.items()) {
        if (!v.is_number()) throw InputError(ctx + "." + k + ": expected a number");
        out[k] = v.get<double>();
    }
    return out;
}

} // namespace autopower::detail
