#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "actint/behavior.hpp"
#include "actint/ingest.hpp"
#include "actint/model.hpp"
#include "actint/ranking.hpp"

namespace actint {

struct ExternalCommand {
  std::string executable;
  std::vector<std::string> args;

  bool operator==(const ExternalCommand&) const = default;
};

/// Every behavior-affecting setting of a run. Loaded from a JSON file whose
/// keys mirror these fields; missing keys keep their defaults.
struct RunConfig {
  std::optional<SmoothingConfig> smoothing = SmoothingConfig{};
  int repeats = 8;
  std::uint64_t seed = 0;
  ScoreMode score_mode = ScoreMode::Signed;
  double z_threshold = 2.0;
  double min_similarity = 0.35;
  double min_overlap_fraction = 0.5;
  double decision_threshold = 0.5;
  /// Empty means the built-in rules.
  std::string rules_path;
  std::optional<std::string> baseline_path;
  std::optional<ExternalCommand> external;
  bool positives_only = true;
  int handshake_timeout_ms = 10'000;
  int request_timeout_ms = 60'000;
  TrainingConfig training;
  IngestConfig ingest;

  /// Range checks on every numeric field. Does not require a model source.
  void validate() const;
  /// Throws ConfigError unless exactly one model source is set.
  void validate_model_source() const;

  RankingConfig ranking() const;
  BehaviorConfig behavior() const;
  /// `training` with the run's seed and decision threshold filled in.
  TrainingConfig training_config() const;
  /// `ingest` with the run's seed and smoothing filled in.
  IngestConfig ingest_config() const;

  /// Canonical JSON: sorted keys, compact.
  std::string to_json() const;
  /// 16 hex digits of FNV-1a 64 over the canonical JSON without file paths,
  /// followed by `content`. Callers pass the model and rule file contents so
  /// the fingerprint names what was used rather than where it was stored.
  std::string fingerprint(std::string_view content = {}) const;

  bool operator==(const RunConfig&) const = default;
};

RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::string& path);

}  // namespace actint
