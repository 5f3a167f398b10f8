#include "ndi/config.hpp"

#include "ndi/csvio.hpp"
#include "ndi/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace ndi {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0, end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
    KeyValueConfig config;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']') {
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": unterminated section header");
            }
            section = trim(stripped.substr(1, stripped.size() - 2));
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key = value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        }
        config.values_[section.empty() ? key : section + "." + key] = value;
    }
    return config;
}

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

bool KeyValueConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string KeyValueConfig::get(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return parse_double(it->second, key.c_str());
}

long KeyValueConfig::get_long(const std::string& key, long fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return parse_long(it->second, key.c_str());
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::string v = it->second;
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "': cannot parse boolean '" + it->second + "'");
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    values_[key] = value;
}

std::string KeyValueConfig::canonical_text() const {
    std::ostringstream out;
    for (const auto& [key, value] : values_) out << key << " = " << value << "\n";
    return out.str();
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open input file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return fnv1a_hex(buffer.str());
}

std::vector<double> parse_strike_spec(const std::string& spec) {
    std::vector<double> strikes;
    if (spec.find(':') != std::string::npos) {
        // min:max:step
        std::istringstream in(spec);
        std::string part;
        std::vector<double> parts;
        while (std::getline(in, part, ':')) {
            parts.push_back(parse_double(trim(part), "strike range"));
        }
        if (parts.size() != 3 || !(parts[2] > 0.0)) {
            throw ConfigError("strike range must be min:max:step with step > 0");
        }
        for (double k = parts[0]; k <= parts[1] + 1e-12 * std::abs(parts[2]); k += parts[2]) {
            strikes.push_back(k);
        }
    } else {
        std::istringstream in(spec);
        std::string part;
        while (std::getline(in, part, ',')) {
            const std::string t = trim(part);
            if (!t.empty()) strikes.push_back(parse_double(t, "strike list"));
        }
    }
    if (strikes.empty()) throw ConfigError("empty strike specification '" + spec + "'");
    return strikes;
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["version"] = version;
    j["seed"] = seed;
    j["config_hash"] = config_hash;
    j["config_text"] = config_text;
    nlohmann::ordered_json inputs_json = nlohmann::ordered_json::object();
    for (const auto& [path, digest] : inputs) inputs_json[path] = digest;
    j["inputs"] = inputs_json;
    j["outputs"] = outputs;
    nlohmann::ordered_json notes_json = nlohmann::ordered_json::object();
    for (const auto& [key, value] : notes) notes_json[key] = value;
    j["notes"] = notes_json;
    return j.dump(2) + "\n";
}

}  // namespace ndi
