#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace minklab {

// Flat sectioned key = value experiment configuration.  '#' starts a
// comment; keys live under the most recent [section].
struct ExperimentConfig {
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::string raw_text;

    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const {
        auto s = sections.find(section);
        return s != sections.end() && s->second.count(key) > 0;
    }

    std::string get_str(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
        auto s = sections.find(section);
        if (s == sections.end()) return fallback;
        auto k = s->second.find(key);
        return k == s->second.end() ? fallback : k->second;
    }

    double get_double(const std::string& section, const std::string& key,
                      double fallback) const {
        if (!has(section, key)) return fallback;
        return std::stod(get_str(section, key, ""));
    }

    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::int64_t fallback) const {
        if (!has(section, key)) return fallback;
        return std::stoll(get_str(section, key, ""));
    }

    std::vector<double> get_list(const std::string& section, const std::string& key,
                                 const std::vector<double>& fallback) const {
        if (!has(section, key)) return fallback;
        std::vector<double> out;
        std::stringstream ss(get_str(section, key, ""));
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
        return out;
    }
};

// FNV-1a 64-bit, for the run manifest's config hash.
std::uint64_t fnv1a64(const std::string& s);

}  // namespace minklab
