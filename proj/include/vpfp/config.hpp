#pragma once

#include "vpfp/scenarios.hpp"

#include <map>
#include <string>

namespace vpfp {

/// Flat key = value settings. Keys are the long CLI flag names without the
/// leading dashes; '_' and '-' are interchangeable.
using ConfigMap = std::map<std::string, std::string>;

/// Parses `key = value` lines; '#' and ';' start comments, [section] headers
/// are ignored.
ConfigMap parse_config_text(const std::string& text, const std::string& origin);

/// Reads an INI-style file, or a JSON object (a run manifest is accepted: its
/// "config" member is used).
ConfigMap load_config_file(const std::string& path);

/// Applies every key to cfg. Unknown keys and malformed values are ConfigError.
void apply_config(const ConfigMap& map, ScenarioConfig& cfg);

ConfigMap to_config_map(const ScenarioConfig& cfg);

}  // namespace vpfp
