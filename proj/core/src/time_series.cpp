#include "actint/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "actint/errors.hpp"
#include "actint/observation.hpp"

namespace actint {

TimeSeries::TimeSeries(std::vector<double> values, double sample_rate_hz, std::string channel_name)
    : values_(std::move(values)),
      sample_rate_hz_(sample_rate_hz),
      channel_name_(std::move(channel_name)) {
  if (values_.size() < 2) {
    throw DataQualityError("time series '" + channel_name_ + "' needs at least 2 samples, got " +
                           std::to_string(values_.size()));
  }
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
    throw DataQualityError("time series '" + channel_name_ + "' has non-positive sample rate");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DataQualityError("time series '" + channel_name_ + "' has a non-finite sample at index " +
                             std::to_string(i));
    }
  }
}

TimeSeries TimeSeries::with_values(std::vector<double> values) const {
  return TimeSeries(std::move(values), sample_rate_hz_, channel_name_);
}

void SmoothingConfig::validate() const {
  if (!(sigma_samples > 0.0) || !std::isfinite(sigma_samples)) {
    throw ConfigError("smoothing sigma_samples must be positive");
  }
  if (truncate_radius_samples < 1 ||
      truncate_radius_samples < static_cast<int>(std::ceil(3.0 * sigma_samples))) {
    throw ConfigError("smoothing truncate_radius_samples must be >= ceil(3 * sigma_samples)");
  }
}

double mean_of(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double population_std(std::span<const double> values) {
  const double m = mean_of(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

std::vector<double> gaussian_kernel(const SmoothingConfig& cfg) {
  cfg.validate();
  const int r = cfg.truncate_radius_samples;
  std::vector<double> k(2 * static_cast<std::size_t>(r) + 1);
  const double denom = 2.0 * cfg.sigma_samples * cfg.sigma_samples;
  double sum = 0.0;
  for (int j = -r; j <= r; ++j) {
    const double w = std::exp(-static_cast<double>(j) * j / denom);
    k[static_cast<std::size_t>(j + r)] = w;
    sum += w;
  }
  for (double& w : k) w /= sum;
  return k;
}

namespace {

// Index into the half-sample symmetric extension (... c b a | a b c ... x y z | z y x ...).
// The extension is periodic with period 2n, so any offset maps back in range.
std::size_t mirror_index(long long i, long long n) {
  const long long period = 2 * n;
  long long m = i % period;
  if (m < 0) m += period;
  if (m >= n) m = period - 1 - m;
  return static_cast<std::size_t>(m);
}

}  // namespace

TimeSeries gaussian_smooth(const TimeSeries& series, const SmoothingConfig& cfg) {
  const std::vector<double> kernel = gaussian_kernel(cfg);
  const long long r = cfg.truncate_radius_samples;
  const auto x = series.values();
  const auto n = static_cast<long long>(x.size());
  std::vector<double> out(x.size());
  for (long long i = 0; i < n; ++i) {
    double acc = 0.0;
    if (i - r >= 0 && i + r < n) {
      for (long long j = -r; j <= r; ++j) acc += kernel[static_cast<std::size_t>(j + r)] * x[i + j];
    } else {
      for (long long j = -r; j <= r; ++j) {
        acc += kernel[static_cast<std::size_t>(j + r)] * x[mirror_index(i + j, n)];
      }
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return series.with_values(std::move(out));
}

TimeSeries gradient(const TimeSeries& series) {
  const auto x = series.values();
  const std::size_t n = x.size();
  std::vector<double> g(n);
  g[0] = x[1] - x[0];
  for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (x[i + 1] - x[i - 1]) / 2.0;
  g[n - 1] = x[n - 1] - x[n - 2];
  return series.with_values(std::move(g));
}

TimeSeries rate_of_change(const TimeSeries& series, const std::optional<SmoothingConfig>& cfg) {
  TimeSeries grad = cfg ? gradient(gaussian_smooth(series, *cfg)) : gradient(series);
  std::vector<double> roc(grad.values().begin(), grad.values().end());
  for (double& v : roc) v = std::fabs(v);
  return series.with_values(std::move(roc));
}

std::optional<ZScore> zscore_normalize(const TimeSeries& series, double epsilon) {
  const auto x = series.values();
  const double m = mean_of(x);
  const double s = population_std(x);
  if (!(s > epsilon)) return std::nullopt;
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - m) / s;
  return ZScore{series.with_values(std::move(z)), m, s};
}

TimeSeries downsample_mean(const TimeSeries& series, int factor) {
  if (factor <= 0) throw DataQualityError("downsample factor must be positive");
  const auto x = series.values();
  const auto f = static_cast<std::size_t>(factor);
  if (x.size() < f) throw DataQualityError("series shorter than the downsample factor");
  const std::size_t blocks = x.size() / f;
  std::vector<double> out(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    double sum = 0.0;
    for (std::size_t k = 0; k < f; ++k) sum += x[b * f + k];
    out[b] = sum / static_cast<double>(f);
  }
  if (out.size() < 2) throw DataQualityError("downsampled series has fewer than 2 samples");
  return TimeSeries(std::move(out), series.sample_rate_hz() / factor, series.channel_name());
}

std::vector<ChannelStats> compute_channel_stats(std::span<const Observation> training_windows) {
  if (training_windows.empty()) throw DataQualityError("cannot compute channel stats of an empty set");
  const auto names = training_windows.front().channel_names();
  for (const auto& obs : training_windows) {
    if (obs.channel_names() != names) {
      throw DataQualityError("training window '" + obs.id() + "' has a different channel set");
    }
  }
  std::vector<ChannelStats> stats;
  stats.reserve(names.size());
  for (const auto& name : names) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& obs : training_windows) {
      const auto& ch = obs.channel(name);
      for (double v : ch.values()) sum += v;
      count += ch.size();
    }
    const double m = sum / static_cast<double>(count);
    double ss = 0.0;
    for (const auto& obs : training_windows) {
      for (double v : obs.channel(name).values()) ss += (v - m) * (v - m);
    }
    stats.push_back({name, m, std::sqrt(ss / static_cast<double>(count)), count});
  }
  return stats;
}

TimeSeries extract_window(const TimeSeries& stream, double stream_start_time, double event_time,
                          const WindowSpec& spec) {
  if (!(spec.lead_start_min > spec.lead_end_min)) {
    throw ConfigError("window lead_start_min must exceed lead_end_min");
  }
  const double rate = stream.sample_rate_hz();
  const double window_start = event_time - spec.lead_start_min * 60.0;
  const double window_end = event_time - spec.lead_end_min * 60.0;
  // Sample k sits at stream_start_time + k / rate. Half-open: include t >= start, t < end.
  constexpr double kSlack = 1e-9;
  const auto first = static_cast<long long>(std::ceil((window_start - stream_start_time) * rate - kSlack));
  const auto last = static_cast<long long>(std::ceil((window_end - stream_start_time) * rate - kSlack));
  const auto n = static_cast<long long>(stream.size());
  const double stream_end = stream_start_time + static_cast<double>(n) / rate;
  if (first < 0) {
    std::ostringstream msg;
    msg.precision(15);
    msg << "stream '" << stream.channel_name() << "' does not cover [" << window_start << ", "
        << stream_start_time << ")";
    throw CoverageError(msg.str(), window_start, std::min(stream_start_time, window_end));
  }
  if (last > n) {
    std::ostringstream msg;
    msg.precision(15);
    msg << "stream '" << stream.channel_name() << "' does not cover [" << stream_end << ", "
        << window_end << ")";
    throw CoverageError(msg.str(), std::max(stream_end, window_start), window_end);
  }
  const auto values = stream.values();
  return stream.with_values(std::vector<double>(values.begin() + first, values.begin() + last));
}

}  // namespace actint
