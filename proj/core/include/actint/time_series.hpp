#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace actint {

class Observation;

/// One uniformly sampled channel. Values are in the channel's native unit.
/// Construction enforces: at least two samples, all finite, positive rate.
class TimeSeries {
 public:
  TimeSeries(std::vector<double> values, double sample_rate_hz, std::string channel_name = {});

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  const std::string& channel_name() const noexcept { return channel_name_; }

  double operator[](std::size_t i) const noexcept { return values_[i]; }

  /// Same rate and name, new samples.
  TimeSeries with_values(std::vector<double> values) const;

  bool operator==(const TimeSeries&) const = default;

 private:
  std::vector<double> values_;
  double sample_rate_hz_;
  std::string channel_name_;
};

/// Discrete Gaussian pre-filter applied before the rate-of-change.
struct SmoothingConfig {
  double sigma_samples = 5.0;
  int truncate_radius_samples = 15;

  /// Throws ConfigError unless sigma > 0 and radius >= ceil(3 sigma).
  void validate() const;

  bool operator==(const SmoothingConfig&) const = default;
};

/// Training-set level statistics for one channel (population std).
struct ChannelStats {
  std::string channel_name;
  double mean = 0.0;
  double std_dev = 0.0;
  std::size_t sample_count = 0;

  bool operator==(const ChannelStats&) const = default;
};

/// Normalized kernel of length 2*radius+1, centre at index radius.
std::vector<double> gaussian_kernel(const SmoothingConfig& cfg);

/// Gaussian smoothing with half-sample symmetric (mirror) boundary extension.
/// Output length equals input length.
TimeSeries gaussian_smooth(const TimeSeries& series, const SmoothingConfig& cfg);

/// One-sided differences at both ends, central differences inside.
TimeSeries gradient(const TimeSeries& series);

/// |gradient(x)|, optionally on the smoothed series.
TimeSeries rate_of_change(const TimeSeries& series, const std::optional<SmoothingConfig>& cfg);

inline constexpr double kDegenerateStdEpsilon = 1e-12;

struct ZScore {
  TimeSeries series;
  double mean;
  double std_dev;
};

/// Population z-score. Returns nullopt for a degenerate (near-constant)
/// series whose std is <= epsilon.
std::optional<ZScore> zscore_normalize(const TimeSeries& series,
                                       double epsilon = kDegenerateStdEpsilon);

/// Mean of non-overlapping blocks of `factor` samples; a trailing partial
/// block is dropped.
TimeSeries downsample_mean(const TimeSeries& series, int factor);

/// Per-channel mean and population std over every sample of every window,
/// in sorted channel order.
std::vector<ChannelStats> compute_channel_stats(std::span<const Observation> training_windows);

/// Window geometry relative to an event, in minutes before the event.
struct WindowSpec {
  double lead_start_min = 72.0;
  double lead_end_min = 12.0;

  bool operator==(const WindowSpec&) const = default;
};

/// Half-open window [event - lead_start, event - lead_end) cut out of a
/// stream whose first sample is at `stream_start_time` (seconds).
/// Throws CoverageError naming the missing span.
TimeSeries extract_window(const TimeSeries& stream, double stream_start_time, double event_time,
                          const WindowSpec& spec = {});

double mean_of(std::span<const double> values);
/// Population standard deviation, two-pass.
double population_std(std::span<const double> values);

}  // namespace actint
