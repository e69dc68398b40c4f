#include "chirpsense/io.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chirpsense {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("sha256_file: cannot open '" + path + "'");
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256_file: digest init failed");
    }
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        std::streamsize got = in.gcount();
        if (got > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(got));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::map<std::string, std::string> parse_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("config file '" + path + "' cannot be opened");
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        std::size_t a = s.find_first_not_of(" \t\r");
        std::size_t b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::domain_error("config '" + path + "' line " + std::to_string(lineno) +
                                    ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::domain_error("config '" + path + "' line " + std::to_string(lineno) +
                                    ": empty key or value");
        if (!out.emplace(key, val).second)
            throw std::domain_error("config '" + path + "' line " + std::to_string(lineno) +
                                    ": duplicate key '" + key + "'");
    }
    return out;
}

std::string RunManifest::write(const std::string& out_prefix,
                               const std::vector<std::string>& output_files) const {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["config"] = config;
    j["library_version"] = kLibraryVersion;
    j["rng_seed"] = rng_seed;
    j["timestamp_utc"] = utc_timestamp();
    nlohmann::json outs = nlohmann::json::array();
    for (const std::string& f : output_files)
        outs.push_back({{"path", f}, {"sha256", sha256_file(f)}});
    j["outputs"] = outs;
    std::string path = out_prefix + ".manifest.json";
    write_json(j, path);
    return path;
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("cannot open '" + path + "'");
    nlohmann::json j;
    in >> j;
    return j;
}

void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
}

} // namespace chirpsense
