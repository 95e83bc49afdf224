#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "actint/observation.hpp"

namespace actint {

/// Black-box boundary. Implementations must not modify the observation.
class ModelAdapter {
 public:
  virtual ~ModelAdapter() = default;

  virtual Prediction predict_proba(const Observation& obs) = 0;
  virtual std::string name() const = 0;
  /// Probability at or above which the label is Positive.
  virtual double decision_threshold() const = 0;
};

struct TrainingConfig {
  int epochs = 400;
  double learning_rate = 0.5;
  double l2 = 1e-3;
  /// Class weights, positive:negative. The default 4:1 compensates a 1:4
  /// positive:negative prevalence.
  double positive_weight = 4.0;
  double negative_weight = 1.0;
  /// Moving-average width for the ROC peak feature (30 samples = 30 s at 1 Hz).
  int pool_width = 30;
  double decision_threshold = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const TrainingConfig&) const = default;
};

/// One entry of the ordered feature descriptor list. Inputs are standardized
/// as (value - center) / scale before weighting.
struct FeatureDescriptor {
  std::string name;
  double center = 0.0;
  double scale = 1.0;

  bool operator==(const FeatureDescriptor&) const = default;
};

/// Pooled-feature logistic classifier used as the built-in stand-in for an
/// arbitrary black box. Immutable after training.
class BaselineModel final : public ModelAdapter {
 public:
  static constexpr int kFormatVersion = 1;

  BaselineModel(std::vector<std::string> channels, std::vector<FeatureDescriptor> feature_spec,
                std::vector<double> weights, double bias, double threshold,
                std::vector<ChannelStats> training_stats, TrainingConfig training,
                std::optional<SmoothingConfig> smoothing);

  Prediction predict_proba(const Observation& obs) override;
  std::string name() const override { return "baseline-logistic"; }
  double decision_threshold() const override { return threshold_; }

  /// Logistic output; const and thread-safe.
  double probability(const Observation& obs) const;
  double decision_value(const std::vector<double>& features) const;

  const std::vector<std::string>& channels() const noexcept { return channels_; }
  const std::vector<FeatureDescriptor>& feature_spec() const noexcept { return feature_spec_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double bias() const noexcept { return bias_; }
  const std::vector<ChannelStats>& training_stats() const noexcept { return training_stats_; }
  const TrainingConfig& training_config() const noexcept { return training_; }
  const std::optional<SmoothingConfig>& smoothing() const noexcept { return smoothing_; }

  /// Copy with a different decision threshold.
  BaselineModel with_threshold(double threshold) const;
  /// Copy with new weights/bias (same feature spec). Used for analytic test models.
  BaselineModel with_weights(std::vector<double> weights, double bias) const;

  std::string to_json() const;
  static BaselineModel from_json(const std::string& text);
  void save(const std::string& path) const;
  static BaselineModel load(const std::string& path);

  bool operator==(const BaselineModel& other) const;

 private:
  std::vector<std::string> channels_;
  std::vector<FeatureDescriptor> feature_spec_;
  std::vector<double> weights_;
  double bias_;
  double threshold_;
  std::vector<ChannelStats> training_stats_;
  TrainingConfig training_;
  std::optional<SmoothingConfig> smoothing_;
};

struct LabeledObservation {
  Observation observation;
  Label label;
};

/// Full-batch gradient descent on class-weighted logistic loss over
/// standardized model_features. Deterministic. Throws DataQualityError on a
/// single-class dataset.
BaselineModel train_baseline(std::span<const LabeledObservation> dataset, const TrainingConfig& config,
                             const std::optional<SmoothingConfig>& smoothing);

double logistic(double z);

}  // namespace actint
