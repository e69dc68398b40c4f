#pragma once

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace chirpsense {

inline constexpr const char* kLibraryVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// Fixed "%.17g" rendering so CSV bytes are reproducible across runs.
std::string format_double(double v);

std::string sha256_file(const std::string& path);

std::string utc_timestamp();

// Simple "key = value" file; '#' starts a comment. Keys are unique.
std::map<std::string, std::string> parse_key_value_file(const std::string& path);

// Written next to every command's outputs; re-running `replay` on it must
// reproduce the output files byte for byte.
struct RunManifest {
    std::string command;
    nlohmann::json config;
    std::uint64_t rng_seed = 0;

    // records digests of the listed files and writes <stem>.manifest.json
    std::string write(const std::string& out_prefix,
                      const std::vector<std::string>& output_files) const;
};

nlohmann::json load_json(const std::string& path);
void write_json(const nlohmann::json& j, const std::string& path);

} // namespace chirpsense
