#pragma once

#include <fstream>
#include <json.hpp>
#include <string>

#include "evokan/common.hpp"

namespace evokan {

inline constexpr const char* kVersionString = "0.1.0";

inline std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw io_error("cannot open " + path);
    try {
        return nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw invalid_argument(path + ": " + e.what());
    }
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open " + path + " for writing");
    os << j.dump(2) << "\n";
    if (!os) throw io_error("write failed: " + path);
}

// Everything needed to reproduce the run: command, normalized config (with
// the seeds inside), and format versions.
inline nlohmann::json make_manifest(const std::string& command,
                                    const nlohmann::json& normalized_config) {
    nlohmann::json m;
    m["command"] = command;
    m["evokan_version"] = kVersionString;
    m["format_versions"] = {{"evkn", 1}, {"evks", 1}};
    m["config"] = normalized_config;
    m["config_hash"] = fnv1a_hex(normalized_config.dump());
    return m;
}

}  // namespace evokan
