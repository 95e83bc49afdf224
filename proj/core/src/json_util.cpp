#include "json_util.hpp"

#include <fstream>
#include <sstream>

namespace actint::detail {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

const json& require(const json& j, const std::string& key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(what + ": missing field '" + key + "'");
  return j.at(key);
}

json smoothing_to_json(const std::optional<SmoothingConfig>& cfg) {
  if (!cfg) return nullptr;
  return {{"sigma_samples", cfg->sigma_samples},
          {"truncate_radius_samples", cfg->truncate_radius_samples}};
}

std::optional<SmoothingConfig> smoothing_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  SmoothingConfig cfg;
  cfg.sigma_samples = require(j, "sigma_samples", "smoothing").get<double>();
  cfg.truncate_radius_samples = require(j, "truncate_radius_samples", "smoothing").get<int>();
  cfg.validate();
  return cfg;
}

json stats_to_json(const std::vector<ChannelStats>& stats) {
  json arr = json::array();
  for (const auto& s : stats) {
    arr.push_back({{"channel", s.channel_name},
                   {"mean", s.mean},
                   {"std_dev", s.std_dev},
                   {"sample_count", s.sample_count}});
  }
  return arr;
}

std::vector<ChannelStats> stats_from_json(const json& j) {
  std::vector<ChannelStats> out;
  for (const auto& e : j) {
    ChannelStats s;
    s.channel_name = require(e, "channel", "training_stats").get<std::string>();
    s.mean = require(e, "mean", "training_stats").get<double>();
    s.std_dev = require(e, "std_dev", "training_stats").get<double>();
    s.sample_count = require(e, "sample_count", "training_stats").get<std::size_t>();
    if (s.std_dev < 0.0 || s.sample_count < 1) {
      throw ConfigError("training_stats for '" + s.channel_name + "' out of range");
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace actint::detail
