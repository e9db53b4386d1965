#include "ndsg/manifest.hpp"

#include "ndsg/csv.hpp"
#include "ndsg/run_config.hpp"

#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>

namespace ndsg {

std::string iso8601_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["config_hash"] = config_hash;
    j["tool_version"] = tool_version;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    j["files"] = nlohmann::json::array();
    for (const auto& f : files) j["files"].push_back({{"path", f.path}, {"digest", f.digest}});
    j["diagnostics"] = diagnostics;
    return j.dump(2) + "\n";
}

std::string emit_file(RunManifest& manifest, const std::string& dir, const std::string& name,
                      const std::string& content) {
    std::filesystem::create_directories(dir);
    const std::string path = (std::filesystem::path(dir) / name).string();
    write_file(path, content);
    manifest.files.push_back({name, hex64(fnv1a64(content))});
    return path;
}

}  // namespace ndsg
