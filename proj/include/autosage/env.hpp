#pragma once

#include <cstdlib>
#include <optional>
#include <string>

namespace autosage::env {

inline std::optional<std::string> get_string(const char* name) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
}

inline std::optional<long long> get_int(const char* name) {
    auto s = get_string(name);
    if (!s) return std::nullopt;
    char* end = nullptr;
    long long v = std::strtoll(s->c_str(), &end, 10);
    if (end == s->c_str() || *end != '\0') return std::nullopt;
    return v;
}

inline std::optional<double> get_double(const char* name) {
    auto s = get_string(name);
    if (!s) return std::nullopt;
    char* end = nullptr;
    double v = std::strtod(s->c_str(), &end);
    if (end == s->c_str() || *end != '\0') return std::nullopt;
    return v;
}

// "0", "false", "off" (any case) and empty count as false; anything else true.
inline bool get_flag(const char* name, bool fallback = false) {
    auto s = get_string(name);
    if (!s) return fallback;
    std::string v = *s;
    for (auto& c : v) c = static_cast<char>(std::tolower(c));
    return !(v == "0" || v == "false" || v == "off");
}

} // namespace autosage::env
