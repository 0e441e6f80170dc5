#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace volcast::cli {

inline constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a64(const std::string& bytes);
std::string digest_hex(const std::string& bytes);

// Identity record for a run: equal manifests (timestamps aside) imply
// byte-identical numeric outputs.
struct RunManifest {
    std::string command;
    std::string version = kVersion;
    std::uint64_t seed = 0;
    std::string config_digest;                      // empty when no config file
    std::map<std::string, std::string> input_digests;  // path -> fnv64 hex
    std::string created_utc;
};

RunManifest make_manifest(const std::string& command, std::uint64_t seed);
void add_input_digest(RunManifest& manifest, const std::string& path);
std::string manifest_to_json(const RunManifest& manifest);

}  // namespace volcast::cli
