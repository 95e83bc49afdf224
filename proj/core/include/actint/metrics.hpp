#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "actint/model.hpp"

namespace actint {

/// Binary confusion matrix with Positive as the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  void add(Label truth, Label predicted);
  std::size_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(std::span<const Label> truth, std::span<const Label> predicted);

double accuracy(const ConfusionMatrix& m);
/// F1 of one class. Zero when the class has no true positives (including the
/// case where precision or recall is undefined).
double f1_score(const ConfusionMatrix& m, Label cls);
/// Sum over both classes of (support / N) * F1.
double weighted_f1(const ConfusionMatrix& m);

/// Fold index (0..k-1) for each label. Each class is shuffled with `seed` and
/// dealt round-robin. Throws ConfigError, with per-class counts, when a class
/// has fewer members than folds.
std::vector<int> stratified_kfold(std::span<const Label> labels, int k, std::uint64_t seed);

struct FoldMetrics {
  int fold = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  ConfusionMatrix confusion;
  double accuracy = 0.0;
  double weighted_f1 = 0.0;
};

struct CrossValidationResult {
  std::vector<FoldMetrics> folds;
  double accuracy_mean = 0.0;
  double accuracy_sd = 0.0;  ///< sample standard deviation across folds
  double weighted_f1_mean = 0.0;
  double weighted_f1_sd = 0.0;
};

using Trainer = std::function<std::unique_ptr<ModelAdapter>(std::span<const LabeledObservation>)>;
/// Called with each fold's model, its training items and its held-out items
/// after the held-out items have been scored.
using FoldHook = std::function<void(int fold, ModelAdapter& model, std::span<const LabeledObservation> train,
                                    std::span<const LabeledObservation> test)>;

CrossValidationResult cross_validate(std::span<const LabeledObservation> data, int folds, std::uint64_t seed,
                                     const Trainer& trainer, const FoldHook& hook = {});

double sample_sd(std::span<const double> values);

/// "77 ± 7.02": mean and sd of a fraction, as whole and two-decimal percentages.
std::string format_mean_sd(double mean_fraction, double sd_fraction);

}  // namespace actint
