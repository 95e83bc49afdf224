#include "actint/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "actint/errors.hpp"

namespace actint {

std::vector<double> pooled_features(const Observation& obs) {
  std::vector<double> f;
  f.reserve(6 * obs.channels().size() + 2);
  for (const auto& [name, raw] : obs.channels()) {
    const auto x = raw.values();
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    f.push_back(mean_of(x));
    f.push_back(population_std(x));
    f.push_back(*lo);
    f.push_back(*hi);
    const auto r = obs.roc(name).values();
    f.push_back(mean_of(r));
    f.push_back(*std::max_element(r.begin(), r.end()));
  }
  const double angle = 2.0 * std::numbers::pi * obs.time_of_day() / 24.0;
  f.push_back(std::sin(angle));
  f.push_back(std::cos(angle));
  return f;
}

double linear_slope(std::span<const double> y) {
  const auto n = static_cast<double>(y.size());
  const double t_mean = (n - 1.0) / 2.0;
  const double y_mean = mean_of(y);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dt = static_cast<double>(i) - t_mean;
    num += dt * (y[i] - y_mean);
    den += dt * dt;
  }
  return den > 0.0 ? num / den : 0.0;
}

double peak_moving_average(std::span<const double> y, int width) {
  if (width < 1) throw ConfigError("pool width must be positive");
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(width), y.size());
  // Each window sum is taken from scratch over w samples so the value does not
  // depend on the accumulated rounding of a running sum.
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t start = 0; start + w <= y.size(); ++start) {
    double sum = 0.0;
    for (std::size_t k = 0; k < w; ++k) sum += y[start + k];
    best = std::max(best, sum);
  }
  return best / static_cast<double>(w);
}

std::vector<double> temporal_features(const Observation& obs, int pool_width) {
  std::vector<double> f;
  f.reserve(2 * obs.channels().size());
  for (const auto& [name, raw] : obs.channels()) {
    f.push_back(linear_slope(raw.values()));
    f.push_back(peak_moving_average(obs.roc(name).values(), pool_width));
  }
  return f;
}

std::vector<std::string> feature_names(const std::vector<std::string>& sorted_channels,
                                       int pool_width) {
  std::vector<std::string> names;
  for (const auto& c : sorted_channels) {
    for (const char* s : {".raw.mean", ".raw.std", ".raw.min", ".raw.max", ".roc.mean", ".roc.max"}) {
      names.push_back(c + s);
    }
  }
  names.emplace_back("time_of_day.sin");
  names.emplace_back("time_of_day.cos");
  for (const auto& c : sorted_channels) {
    names.push_back(c + ".raw.slope");
    names.push_back(c + ".roc.peak_avg" + std::to_string(pool_width));
  }
  return names;
}

std::vector<double> model_features(const Observation& obs, int pool_width) {
  auto f = pooled_features(obs);
  const auto t = temporal_features(obs, pool_width);
  f.insert(f.end(), t.begin(), t.end());
  return f;
}

}  // namespace actint
