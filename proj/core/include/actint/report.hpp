#pragma once

#include <string>
#include <vector>

#include "actint/behavior.hpp"
#include "actint/observation.hpp"
#include "actint/ranking.hpp"

namespace actint {

/// Everything produced for one observation. Serializes to one JSON line.
struct InterpretationReport {
  static constexpr int kFormatVersion = 1;

  std::string observation_id;
  Prediction prediction;
  ImportanceRanking ranking;
  PredictorId top_predictor;
  BehaviorEvidence evidence;
  /// Non-empty only for positive predictions with a matching rule.
  std::vector<std::string> suggestions;
  std::string config_fingerprint;
  std::string tool_version;

  bool operator==(const InterpretationReport&) const = default;
};

/// Single-line JSON (no trailing newline).
std::string report_to_json(const InterpretationReport& report);
InterpretationReport report_from_json(const std::string& line);

/// Newline-delimited JSON, one report per line.
std::string reports_to_ndjson(const std::vector<InterpretationReport>& reports);
std::vector<InterpretationReport> reports_from_ndjson(const std::string& text);

std::string to_string(Label label);
Label label_from_string(const std::string& s);

}  // namespace actint
