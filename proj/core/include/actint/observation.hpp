#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "actint/time_series.hpp"

namespace actint {

/// The model's input unit: a multichannel window, the rate-of-change of each
/// channel, and the time of day (hours in [0, 24)).
///
/// Structure is validated on construction (equal lengths and rates, matching
/// ROC keys, time-of-day range). The ROC content itself is not re-derived so
/// that disarranged copies stay representable; use `from_channels` to build
/// an observation whose ROC is computed from the raw series.
class Observation {
 public:
  Observation(std::string id, std::map<std::string, TimeSeries> channels,
              std::map<std::string, TimeSeries> channel_roc, double time_of_day);

  static Observation from_channels(std::string id, std::map<std::string, TimeSeries> channels,
                                   double time_of_day,
                                   const std::optional<SmoothingConfig>& smoothing);

  const std::string& id() const noexcept { return id_; }
  double time_of_day() const noexcept { return time_of_day_; }
  const std::map<std::string, TimeSeries>& channels() const noexcept { return channels_; }
  const std::map<std::string, TimeSeries>& channel_roc() const noexcept { return roc_; }

  /// Sorted channel names.
  std::vector<std::string> channel_names() const;
  const TimeSeries& channel(const std::string& name) const;
  const TimeSeries& roc(const std::string& name) const;
  bool has_channel(const std::string& name) const { return channels_.contains(name); }

  std::size_t window_length() const noexcept { return channels_.begin()->second.size(); }
  double sample_rate_hz() const noexcept { return channels_.begin()->second.sample_rate_hz(); }

  // Mutators used to build disarranged copies. They keep structure valid.
  void replace_channel(const std::string& name, std::vector<double> values);
  void replace_roc(const std::string& name, std::vector<double> values);
  void set_time_of_day(double hours);

  bool operator==(const Observation&) const = default;

 private:
  std::string id_;
  std::map<std::string, TimeSeries> channels_;
  std::map<std::string, TimeSeries> roc_;
  double time_of_day_;
};

/// One model input: a channel's raw window, its ROC window, or time of day.
struct PredictorId {
  enum class Kind { Raw, Roc, TimeOfDay };

  Kind kind = Kind::TimeOfDay;
  std::string channel;

  static PredictorId raw(std::string channel) { return {Kind::Raw, std::move(channel)}; }
  static PredictorId roc(std::string channel) { return {Kind::Roc, std::move(channel)}; }
  static PredictorId time_of_day() { return {Kind::TimeOfDay, {}}; }

  bool is_series() const noexcept { return kind != Kind::TimeOfDay; }

  /// "raw:light", "roc:light" or "time_of_day".
  std::string key() const;
  static PredictorId parse(const std::string& key);
  /// Display name in the style "light ROC", "light level", "Time-of-day".
  std::string display() const;

  bool operator==(const PredictorId&) const = default;
  /// Channel name first, then Raw < Roc. TimeOfDay sorts after every channel.
  std::strong_ordering operator<=>(const PredictorId& other) const;
};

/// Every predictor of an observation: Raw and Roc per channel (sorted), then TimeOfDay.
std::vector<PredictorId> predictors_of(const Observation& obs);

enum class Label { Negative = 0, Positive = 1 };

struct Prediction {
  Label label = Label::Negative;
  double probability = 0.0;  ///< probability of Positive

  static Prediction from_probability(double probability, double threshold);
  bool operator==(const Prediction&) const = default;
};

}  // namespace actint
