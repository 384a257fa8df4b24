#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

#include "skewstream/error.hpp"

namespace skewstream::detail {

/// Parses JSON text; syntax errors become ConfigError with a line number.
inline nlohmann::json parse_json(std::string_view text, std::string_view what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i < text.size() && i < e.byte; ++i)
            if (text[i] == '\n') ++line;
        throw ConfigError(std::string(what) + ": malformed JSON at line " + std::to_string(line));
    }
}

template <typename T>
T field_as(const nlohmann::json& obj, const std::string& key, const std::string& path) {
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("missing or mistyped field '" + path + key + "'");
    }
}

template <typename T>
T field_or(const nlohmann::json& obj, const std::string& key, T fallback, const std::string& path) {
    if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
    return field_as<T>(obj, key, path);
}

}  // namespace skewstream::detail

namespace skewstream {
struct EngineConfig;
}

namespace skewstream::detail {

nlohmann::json engine_config_to_json(const EngineConfig& config);
/// Reads engine keys from a flat config object; absent keys keep `base` values.
EngineConfig engine_config_from_json(const nlohmann::json& obj, EngineConfig base);

}  // namespace skewstream::detail
