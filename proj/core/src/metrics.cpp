#include "actint/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "actint/errors.hpp"
#include "actint/rng.hpp"

namespace actint {

void ConfusionMatrix::add(Label truth, Label predicted) {
  if (truth == Label::Positive) {
    ++(predicted == Label::Positive ? tp : fn);
  } else {
    ++(predicted == Label::Positive ? fp : tn);
  }
}

ConfusionMatrix confusion(std::span<const Label> truth, std::span<const Label> predicted) {
  if (truth.size() != predicted.size()) throw ConfigError("confusion: label vectors differ in length");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < truth.size(); ++i) m.add(truth[i], predicted[i]);
  return m;
}

double accuracy(const ConfusionMatrix& m) {
  if (m.total() == 0) throw ConfigError("accuracy of an empty confusion matrix");
  return static_cast<double>(m.tp + m.tn) / static_cast<double>(m.total());
}

double f1_score(const ConfusionMatrix& m, Label cls) {
  // For the negative class the roles of the cells swap.
  const auto tp = static_cast<double>(cls == Label::Positive ? m.tp : m.tn);
  const auto fp = static_cast<double>(cls == Label::Positive ? m.fp : m.fn);
  const auto fn = static_cast<double>(cls == Label::Positive ? m.fn : m.fp);
  if (tp == 0.0) return 0.0;
  return 2.0 * tp / (2.0 * tp + fp + fn);
}

double weighted_f1(const ConfusionMatrix& m) {
  if (m.total() == 0) throw ConfigError("weighted F1 of an empty confusion matrix");
  const auto n = static_cast<double>(m.total());
  const auto pos = static_cast<double>(m.tp + m.fn);
  const auto neg = static_cast<double>(m.tn + m.fp);
  return pos / n * f1_score(m, Label::Positive) + neg / n * f1_score(m, Label::Negative);
}

std::vector<int> stratified_kfold(std::span<const Label> labels, int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("cross-validation needs at least 2 folds");
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[static_cast<int>(labels[i])].push_back(i);
  const auto neg = by_class[0].size();
  const auto pos = by_class[1].size();
  if (neg < static_cast<std::size_t>(k) || pos < static_cast<std::size_t>(k)) {
    throw ConfigError(std::to_string(k) + "-fold stratification is infeasible: " + std::to_string(pos) +
                      " positive and " + std::to_string(neg) + " negative observations; every class needs at least " +
                      std::to_string(k));
  }
  std::vector<int> fold(labels.size(), 0);
  for (int c = 0; c < 2; ++c) {
    auto& idx = by_class[c];
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
    rng.shuffle(std::span<std::size_t>(idx));
    for (std::size_t j = 0; j < idx.size(); ++j) fold[idx[j]] = static_cast<int>(j % static_cast<std::size_t>(k));
  }
  return fold;
}

double sample_sd(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

CrossValidationResult cross_validate(std::span<const LabeledObservation> data, int folds, std::uint64_t seed,
                                     const Trainer& trainer, const FoldHook& hook) {
  std::vector<Label> labels;
  labels.reserve(data.size());
  for (const auto& d : data) labels.push_back(d.label);
  const auto assignment = stratified_kfold(labels, folds, seed);

  CrossValidationResult out;
  std::vector<double> accs;
  std::vector<double> f1s;
  for (int f = 0; f < folds; ++f) {
    std::vector<LabeledObservation> train;
    std::vector<LabeledObservation> test;
    for (std::size_t i = 0; i < data.size(); ++i) (assignment[i] == f ? test : train).push_back(data[i]);
    auto model = trainer(train);
    FoldMetrics fm;
    fm.fold = f;
    fm.train_size = train.size();
    fm.test_size = test.size();
    for (const auto& t : test) fm.confusion.add(t.label, model->predict_proba(t.observation).label);
    fm.accuracy = accuracy(fm.confusion);
    fm.weighted_f1 = weighted_f1(fm.confusion);
    accs.push_back(fm.accuracy);
    f1s.push_back(fm.weighted_f1);
    if (hook) hook(f, *model, train, test);
    out.folds.push_back(fm);
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  out.accuracy_mean = mean(accs);
  out.accuracy_sd = sample_sd(accs);
  out.weighted_f1_mean = mean(f1s);
  out.weighted_f1_sd = sample_sd(f1s);
  return out;
}

std::string format_mean_sd(double mean_fraction, double sd_fraction) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.0f ± %.2f", mean_fraction * 100.0, sd_fraction * 100.0);
  return buf;
}

}  // namespace actint
