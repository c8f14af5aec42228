#include "srg/config.hpp"

#include <algorithm>
#include <charconv>

#include "srg/serialize.hpp"

namespace srg {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t')) --b;
    return s.substr(a, b - a);
}

} // namespace

ConfigMap ConfigMap::parse_text(const std::string& text) {
    ConfigMap cfg;
    std::string section;
    std::size_t line_no = 0;
    std::string line;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": empty section name");
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ValidationError("config line " + std::to_string(line_no) + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (cfg.values_.count(full))
            throw ValidationError("config: duplicate key '" + full + "'");
        cfg.values_[full] = value;
    }
    return cfg;
}

ConfigMap ConfigMap::parse_file(const std::string& path) {
    return parse_text(read_text_file(path));
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return parse_double(it->second);
    } catch (const ValidationError&) {
        throw ValidationError("config: key '" + key + "' is not a valid number: '" +
                              it->second + "'");
    }
}

long ConfigMap::get_long(const std::string& key, long fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    long v = 0;
    const std::string& s = it->second;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ValidationError("config: key '" + key + "' is not a valid integer: '" + s + "'");
    return v;
}

std::uint64_t ConfigMap::get_uint64(const std::string& key, std::uint64_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::uint64_t v = 0;
    const std::string& s = it->second;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ValidationError("config: key '" + key + "' is not a valid unsigned integer: '" +
                              s + "'");
    return v;
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ValidationError("config: key '" + key + "' is not a valid boolean: '" + it->second +
                          "'");
}

std::vector<double> ConfigMap::get_double_list(const std::string& key,
                                               const std::vector<double>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::string cur;
    for (char c : it->second + ",") {
        if (c == ',') {
            const std::string t = trim(cur);
            cur.clear();
            if (t.empty()) continue;
            try {
                out.push_back(parse_double(t));
            } catch (const ValidationError&) {
                throw ValidationError("config: key '" + key + "' has a non-numeric entry: '" +
                                      t + "'");
            }
        } else {
            cur.push_back(c);
        }
    }
    if (out.empty())
        throw ValidationError("config: key '" + key + "' holds an empty list");
    return out;
}

void ConfigMap::require_known(const std::vector<std::string>& allowed) const {
    for (const auto& [key, value] : values_) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ValidationError("config: unknown key '" + key + "'");
    }
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x00000100000001B3ULL;
    }
    return h;
}

std::string ConfigMap::hash() const {
    std::string canon;
    for (const auto& [key, value] : values_) canon += key + "=" + value + "\n";
    const std::uint64_t h = fnv1a64(canon);
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 0; i < 16; ++i) buf[i] = hex[(h >> (60 - 4 * i)) & 0xF];
    buf[16] = '\0';
    return std::string(buf);
}

} // namespace srg
