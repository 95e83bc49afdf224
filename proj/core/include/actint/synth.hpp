#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "actint/model.hpp"
#include "actint/report.hpp"

namespace actint {

enum class NoiseModel {
  White,       ///< i.i.d. normal with the channel's baseline std
  RandomWalk,  ///< cumulative normal steps; drift over the window has std of the baseline std
  None,        ///< noise-free; baseline std still sets the trigger scale
};

struct ChannelSpec {
  std::string name;
  double baseline_mean = 0.0;
  double baseline_std = 1.0;
  NoiseModel noise_model = NoiseModel::White;
  /// Peak of a -cos daily cycle added on top of the baseline.
  double diurnal_amplitude = 0.0;

  bool operator==(const ChannelSpec&) const = default;
};

/// Behaviors a trigger can plant. TimeOfDay concentrates positives in the
/// configured hour band instead of altering a channel.
enum class TriggerBehavior {
  Increasing,
  Decreasing,
  SuddenChangeUp,
  SuddenChangeDown,
  AbnormallyHigh,
  AbnormallyLow,
  TimeOfDay,
};

std::string to_string(TriggerBehavior b);
TriggerBehavior trigger_behavior_from_string(const std::string& s);

struct TriggerSpec {
  std::string channel;  ///< ignored for TimeOfDay
  TriggerBehavior behavior = TriggerBehavior::SuddenChangeUp;
  /// Size of the planted change in units of the channel's baseline std.
  double magnitude_sigma = 3.0;
  double weight = 1.0;

  bool operator==(const TriggerSpec&) const = default;
};

struct ScenarioSpec {
  std::vector<ChannelSpec> channels;
  int window_length_samples = 3600;
  double sample_rate_hz = 1.0;
  int positive_count = 48;
  int negative_count = 192;
  std::vector<TriggerSpec> trigger_mix;
  /// Hour band [start, end) for TimeOfDay triggers. May wrap past midnight.
  double tod_band_start = 16.0;
  double tod_band_end = 20.0;
  std::optional<SmoothingConfig> smoothing = SmoothingConfig{};
  std::uint64_t seed = 0;

  /// Throws ConfigError describing the first problem.
  void validate() const;
  bool operator==(const ScenarioSpec&) const = default;
};

/// Five channels (light, temperature, humidity, pressure, noise) at 1 Hz,
/// 3600-sample windows, 48 positives and 192 negatives.
ScenarioSpec default_scenario();

std::string scenario_to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(const std::string& text);

struct TruthRecord {
  /// Empty for TimeOfDay triggers.
  std::string channel;
  TriggerBehavior behavior = TriggerBehavior::SuddenChangeUp;
  /// First sample of a planted step; nullopt for other triggers.
  std::optional<int> injection_lag;

  bool operator==(const TruthRecord&) const = default;
};

struct GroundTruth {
  /// One record per positive observation.
  std::map<std::string, TruthRecord> records;
  /// Every generated observation id, positives and negatives.
  std::set<std::string> observation_ids;

  bool operator==(const GroundTruth&) const = default;
};

std::string truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const std::string& text);

struct SyntheticData {
  /// Ordered by observation id.
  std::vector<LabeledObservation> items;
  GroundTruth truth;
};

/// Deterministic in spec.seed. Each observation draws from its own stream so
/// changing one count does not reshuffle the others.
SyntheticData generate_dataset(const ScenarioSpec& spec);

/// Whether a report's finding matches the planted trigger.
bool channel_recovered(const InterpretationReport& report, const TruthRecord& truth);
bool behavior_recovered(const InterpretationReport& report, const TruthRecord& truth);

struct CauseFrequency {
  std::string predictor;  ///< PredictorId key
  BehaviorLabel behavior = BehaviorLabel::NoDominantChange;
  std::size_t count = 0;
  double fraction = 0.0;

  bool operator==(const CauseFrequency&) const = default;
};

struct RecoveryMetrics {
  std::size_t true_positive_count = 0;
  std::size_t channel_hits = 0;
  std::size_t behavior_hits = 0;
  /// nullopt (reported as n/a) when there are no true positives.
  std::optional<double> channel_rate;
  std::optional<double> behavior_rate;
  /// Findings over every positive report, most frequent first.
  std::vector<CauseFrequency> causes;
};

/// Throws ConfigError if a report names an observation the truth does not know.
RecoveryMetrics score_recovery(const std::vector<InterpretationReport>& reports, const GroundTruth& truth);

std::string format_rate(const std::optional<double>& rate);

}  // namespace actint
