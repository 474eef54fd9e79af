#pragma once

#include <map>
#include <string>

#include <json.hpp>

namespace minklab {

// Named collection of measured norms/constants plus grid or sampling metadata.
struct NormReport {
    std::string name;
    std::map<std::string, double> values;
    std::map<std::string, std::string> meta;

    double at(const std::string& key) const { return values.at(key); }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["name"] = name;
        j["values"] = values;
        j["meta"] = meta;
        return j;
    }
};

}  // namespace minklab
