#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "srg/geometry.hpp"

namespace srg {

//============================================================================
// Flat key-value run configuration:
//
//     # comment
//     [section]
//     key = value
//
// Keys are addressed as "section.key".  Duplicate keys are rejected, and
// consumers declare the keys they understand so misspelled keys fail loudly
// instead of being silently ignored.  The configuration text has a stable
// 64-bit hash that run outputs embed for provenance.
//============================================================================

class ConfigMap {
public:
    static ConfigMap parse_text(const std::string& text);
    static ConfigMap parse_file(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    /// Comma-separated list of reals.
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;

    /// Throws naming the first key that is not in the allowed list.
    void require_known(const std::vector<std::string>& allowed) const;

    const std::map<std::string, std::string>& values() const { return values_; }

    /// FNV-1a 64 over the sorted canonical "key=value" lines, as fixed-width hex.
    std::string hash() const;

private:
    std::map<std::string, std::string> values_;
};

/// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(const std::string& bytes);

} // namespace srg
