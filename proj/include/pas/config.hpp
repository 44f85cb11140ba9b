#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pas/params.hpp"

namespace pas {

inline constexpr const char* kToolVersion = "0.1.0";

/// A loaded instance: the validated model plus the decision labels the
/// instance is solved and simulated with.
struct AppConfig {
    std::string name;
    ModelParams params;
    std::vector<DecisionLabel> decisions;
    uint64_t hash = 0;  // of the canonical serialized form
};

/// Parses and validates an instance description. Scalar cost entries are
/// expanded to full matrices; a scalar penalty honors `penalty_scope`
/// ("nonprimary" charges only wards other than the type's first choice).
/// Throws ConfigError naming the offending field.
AppConfig config_from_json(const nlohmann::json& j);

AppConfig load_config(const std::string& path);

/// Canonical (fully expanded) serialized form; reloads to an identical model.
nlohmann::json config_to_json(const AppConfig& config);

void save_config(const AppConfig& config, const std::string& path);

uint64_t fnv1a_hash(const std::string& text);

} // namespace pas
