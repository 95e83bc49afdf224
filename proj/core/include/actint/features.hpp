#pragma once

#include <span>
#include <string>
#include <vector>

#include "actint/observation.hpp"

namespace actint {

/// Permutation-invariant pooled summary, 6*C + 2 values:
/// per channel in sorted order [raw mean, raw std, raw min, raw max, roc mean, roc max],
/// then [sin(2 pi tod / 24), cos(2 pi tod / 24)].
std::vector<double> pooled_features(const Observation& obs);

/// Order-sensitive summary, 2*C values: per channel in sorted order
/// [least-squares slope of the raw window (units per sample),
///  peak of the `pool_width`-sample moving average of the ROC].
/// Shuffling a series changes these, so permutation importance can see them.
std::vector<double> temporal_features(const Observation& obs, int pool_width);

/// Feature names aligned with pooled_features followed by temporal_features.
std::vector<std::string> feature_names(const std::vector<std::string>& sorted_channels,
                                       int pool_width);

/// Full baseline input: pooled_features ++ temporal_features.
std::vector<double> model_features(const Observation& obs, int pool_width);

/// Least-squares slope of y against its sample index.
double linear_slope(std::span<const double> y);
/// Largest mean over any `width` consecutive samples (width clamped to size).
double peak_moving_average(std::span<const double> y, int width);

}  // namespace actint
