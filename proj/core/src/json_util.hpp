#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "actint/errors.hpp"
#include "actint/time_series.hpp"

namespace actint::detail {

using nlohmann::json;

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

json parse_json(const std::string& text, const std::string& what);

/// Throws ConfigError naming `what` when `key` is missing.
const json& require(const json& j, const std::string& key, const std::string& what);

json smoothing_to_json(const std::optional<SmoothingConfig>& cfg);
std::optional<SmoothingConfig> smoothing_from_json(const json& j);

json stats_to_json(const std::vector<ChannelStats>& stats);
std::vector<ChannelStats> stats_from_json(const json& j);

}  // namespace actint::detail
