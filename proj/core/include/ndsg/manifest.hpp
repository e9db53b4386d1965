#pragma once

// Reproducibility record written next to every produced artifact set: the
// config digest, tool version, wall-clock bounds, per-file content digests
// and a short diagnostic summary.  Re-running a recipe must reproduce every
// digest bit for bit.

#include <cstdint>
#include <string>
#include <vector>

namespace ndsg {

struct ManifestFile {
    std::string path;    // relative to the manifest location
    std::string digest;  // fnv1a64 of the bytes, hex
};

struct RunManifest {
    std::string config_hash;
    std::string tool_version;
    std::string started_at;   // ISO-8601 UTC
    std::string finished_at;
    std::vector<ManifestFile> files;
    std::vector<std::string> diagnostics;

    std::string to_json() const;
};

std::string iso8601_utc_now();

// Registers `content` under `name`, writes it into `dir` and records the
// digest.  Returns the full path.
std::string emit_file(RunManifest& manifest, const std::string& dir, const std::string& name,
                      const std::string& content);

}  // namespace ndsg
