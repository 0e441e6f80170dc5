#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "volcast/experiment.hpp"

namespace volcast::cli {

// Key-value config text with [section] headers, # or ; comments. Keys are
// addressed as "section.key"; keys before any header have no prefix.
class ConfigFile {
public:
    static ConfigFile parse(const std::string& text);
    static ConfigFile load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::optional<std::string> get(const std::string& key) const;
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

struct ForecastConfig {
    std::string prices_path;
    std::string out_dir = "run";
    pipeline::ExperimentPlan plan;
};

// Builds and validates the experiment plan. Collects every problem before
// failing so a bad config reports all its errors at once.
ForecastConfig build_forecast_config(const ConfigFile& file);

}  // namespace volcast::cli
