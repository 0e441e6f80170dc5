#include "volcast/manifest.hpp"

#include <cstdio>
#include <ctime>

#include <json.hpp>

#include "volcast/csv.hpp"

namespace volcast::cli {

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string digest_hex(const std::string& bytes) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

RunManifest make_manifest(const std::string& command, std::uint64_t seed) {
    RunManifest m;
    m.command = command;
    m.seed = seed;
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    m.created_utc = buf;
    return m;
}

void add_input_digest(RunManifest& manifest, const std::string& path) {
    manifest.input_digests[path] = digest_hex(read_text_file(path));
}

std::string manifest_to_json(const RunManifest& manifest) {
    nlohmann::json j;
    j["command"] = manifest.command;
    j["version"] = manifest.version;
    j["seed"] = manifest.seed;
    if (!manifest.config_digest.empty()) j["config_digest"] = manifest.config_digest;
    j["input_digests"] = manifest.input_digests;
    j["created_utc"] = manifest.created_utc;
    return j.dump(2) + "\n";
}

}  // namespace volcast::cli
