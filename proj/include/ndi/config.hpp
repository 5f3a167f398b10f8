#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ndi {

// Plain-text key-value configuration with [section] headers. Keys are
// addressed as "section.key"; every key has a CLI flag twin.
class KeyValueConfig {
public:
    static KeyValueConfig parse(const std::string& text);
    static KeyValueConfig from_file(const std::string& path);

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    void set(const std::string& key, const std::string& value);

    // Canonical "section.key = value" lines, sorted; used for hashing and
    // for the run manifest.
    std::string canonical_text() const;

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

// FNV-1a 64-bit digest, hex-encoded.
std::string fnv1a_hex(const std::string& bytes);
std::string file_digest(const std::string& path);

// "1:10:2" -> {1,3,5,7,9}; "1,2,5" -> {1,2,5}.
std::vector<double> parse_strike_spec(const std::string& spec);

struct RunManifest {
    std::string command;
    std::string config_text;  // canonical resolved configuration
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version;
    std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
    std::vector<std::string> outputs;
    std::vector<std::pair<std::string, std::string>> notes;  // free-form stats

    std::string to_json() const;
};

inline const char* kVersion = "0.1.0";

}  // namespace ndi
