#pragma once

// Flat key = value configuration files with [sections]: human-editable,
// diffable, and round-trip lossless under the canonical serialization.

#include "ndsg/evolution.hpp"

#include <string>

namespace ndsg {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parse a config file body.  Unknown keys are rejected (typo safety); every
// physical precondition is validated before returning.
RunConfig parse_run_config(const std::string& text);

// Canonical text form: fixed section and key order, shortest round-trip
// number formatting.  parse(serialize(c)) == c, field for field.
std::string serialize_run_config(const RunConfig& config);

// FNV-1a 64-bit digest, used for config hashes and file digests.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t value);

}  // namespace ndsg
