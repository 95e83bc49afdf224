#pragma once

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "actint/model.hpp"
#include "actint/observation.hpp"
#include "actint/rng.hpp"
#include "actint/time_series.hpp"

namespace actint::test {

inline std::vector<double> noise(std::size_t n, std::uint64_t seed, double scale = 1.0, double offset = 0.0) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = offset + scale * rng.normal();
  return v;
}

inline TimeSeries series(std::vector<double> v, double rate = 1.0) { return TimeSeries(std::move(v), rate); }

/// Observation whose channels are seeded noise, ROC computed with default smoothing.
inline Observation random_observation(const std::string& id, const std::vector<std::string>& names, std::size_t n,
                                      std::uint64_t seed, double tod = 12.0) {
  std::map<std::string, TimeSeries> ch;
  std::uint64_t k = 0;
  for (const auto& name : names) ch.emplace(name, TimeSeries(noise(n, mix_seed(seed, k++), 1.0, 10.0), 1.0, name));
  return Observation::from_channels(id, std::move(ch), tod, SmoothingConfig{});
}

/// Temporary directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("actint-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string operator/(const std::string& leaf) const { return (path_ / leaf).string(); }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::filesystem::path path_;
};

/// Two-class dataset where positives carry a step in channel `signal`'s ROC.
inline std::vector<LabeledObservation> step_dataset(const std::vector<std::string>& names, const std::string& signal,
                                                    int positives, int negatives, std::size_t n, std::uint64_t seed) {
  std::vector<LabeledObservation> out;
  for (int i = 0; i < positives + negatives; ++i) {
    const bool pos = i < positives;
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    std::map<std::string, TimeSeries> ch;
    std::uint64_t k = 0;
    for (const auto& name : names) {
      auto v = noise(n, mix_seed(mix_seed(seed, static_cast<std::uint64_t>(i)), k++), 1.0, 10.0);
      if (pos && name == signal) {
        const auto lag = static_cast<std::size_t>(rng.uniform(0.2, 0.8) * static_cast<double>(n));
        for (std::size_t t = lag; t < n; ++t) v[t] += 8.0;
      }
      ch.emplace(name, TimeSeries(std::move(v), 1.0, name));
    }
    out.push_back({Observation::from_channels((pos ? "p" : "n") + std::to_string(i), std::move(ch),
                                              rng.uniform(0.0, 24.0), SmoothingConfig{}),
                   pos ? Label::Positive : Label::Negative});
  }
  return out;
}

}  // namespace actint::test
