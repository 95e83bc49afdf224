#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "actint/errors.hpp"
#include "actint/external_model.hpp"
#include "actint/features.hpp"
#include "actint/model.hpp"
#include "support.hpp"

namespace actint {
namespace {

using test::series;

BaselineModel small_model(const std::vector<std::string>& names = {"a", "b"}) {
  const auto data = test::step_dataset(names, names.front(), 6, 6, 64, 11);
  return train_baseline(data, TrainingConfig{}, SmoothingConfig{});
}

TEST(PooledFeatures, ConstantChannel) {
  const Observation obs("o", {{"c", series({1, 1, 1, 1})}}, {{"c", series({0, 0, 0, 0})}}, 0.0);
  const auto f = pooled_features(obs);
  const std::vector<double> expected = {1, 0, 1, 1, 0, 0, 0, 1};
  ASSERT_EQ(f.size(), expected.size());
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_DOUBLE_EQ(f[i], expected[i]) << i;
}

TEST(PooledFeatures, LengthIsSixPerChannelPlusTwo) {
  const auto obs = test::random_observation("o", {"light", "temperature", "humidity", "pressure", "noise"}, 100, 1);
  EXPECT_EQ(pooled_features(obs).size(), 32u);
  EXPECT_EQ(model_features(obs, 30).size(), 42u);
  EXPECT_EQ(feature_names({"a", "b", "c", "d", "e"}, 30).size(), 42u);
}

TEST(PooledFeatures, MatchesRecomputation) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto obs = test::random_observation("o", {"x", "y", "z"}, 257, seed, 7.25);
    const auto f = pooled_features(obs);
    std::vector<double> ref;
    for (const auto& name : {"x", "y", "z"}) {
      const auto v = obs.channel(name).values();
      double s = 0.0;
      for (double x : v) s += x;
      const double m = s / static_cast<double>(v.size());
      double ss = 0.0;
      for (double x : v) ss += (x - m) * (x - m);
      ref.push_back(m);
      ref.push_back(std::sqrt(ss / static_cast<double>(v.size())));
      ref.push_back(*std::min_element(v.begin(), v.end()));
      ref.push_back(*std::max_element(v.begin(), v.end()));
      const auto r = obs.roc(name).values();
      double rs = 0.0;
      for (double x : r) rs += x;
      ref.push_back(rs / static_cast<double>(r.size()));
      ref.push_back(*std::max_element(r.begin(), r.end()));
    }
    ref.push_back(std::sin(2.0 * std::numbers::pi * 7.25 / 24.0));
    ref.push_back(std::cos(2.0 * std::numbers::pi * 7.25 / 24.0));
    ASSERT_EQ(f.size(), ref.size());
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(f[i], ref[i], 1e-12) << i;
  }
}

TEST(TemporalFeatures, SlopeAndPeakAverage) {
  EXPECT_DOUBLE_EQ(linear_slope(std::vector<double>{1, 3, 5, 7}), 2.0);
  EXPECT_DOUBLE_EQ(peak_moving_average(std::vector<double>{0, 0, 3, 3, 0}, 2), 3.0);
  EXPECT_DOUBLE_EQ(peak_moving_average(std::vector<double>{1, 2}, 30), 1.5);
  EXPECT_THROW(peak_moving_average(std::vector<double>{1, 2}, 0), ConfigError);
}

TEST(BaselineModel, ZeroWeightsGiveOneHalf) {
  const auto m = small_model();
  auto zero = m.with_weights(std::vector<double>(m.weights().size(), 0.0), 0.0);
  const auto p = zero.predict_proba(test::random_observation("o", {"a", "b"}, 64, 3));
  EXPECT_EQ(p.probability, 0.5);
  EXPECT_EQ(p.label, Label::Positive);
}

TEST(BaselineModel, LargeBiasSaturates) {
  const auto m = small_model();
  auto pos = m.with_weights(std::vector<double>(m.weights().size(), 0.0), 10.0);
  EXPECT_GT(pos.predict_proba(test::random_observation("o", {"a", "b"}, 64, 3)).probability, 0.9999);
}

TEST(BaselineModel, SingleClassRejected) {
  auto data = test::step_dataset({"a"}, "a", 0, 5, 32, 1);
  EXPECT_THROW(train_baseline(data, TrainingConfig{}, std::nullopt), DataQualityError);
}

// Perceptron on the same standardized feature confirms separability; the
// trained baseline must then classify the training set perfectly.
TEST(BaselineModel, SeparableToySetIsFitExactly) {
  std::vector<LabeledObservation> data;
  Rng rng(21);
  for (int i = 0; i < 20; ++i) {
    const bool pos = i % 2 == 0;
    const double level = (pos ? 1.0 : -1.0) * rng.uniform(0.5, 3.0);
    auto v = test::noise(16, mix_seed(21, i), 0.1, level);
    data.push_back({Observation::from_channels("t" + std::to_string(i), {{"a", TimeSeries(v, 1.0, "a")}},
                                               rng.uniform(0, 24), std::nullopt),
                    pos ? Label::Positive : Label::Negative});
  }
  double w = 0.0;
  double b = 0.0;
  bool converged = false;
  for (int epoch = 0; epoch < 1000 && !converged; ++epoch) {
    converged = true;
    for (const auto& d : data) {
      const double x = mean_of(d.observation.channel("a").values());
      const double y = d.label == Label::Positive ? 1.0 : -1.0;
      if (y * (w * x + b) <= 0.0) {
        w += y * x;
        b += y;
        converged = false;
      }
    }
  }
  ASSERT_TRUE(converged);

  auto model = train_baseline(data, TrainingConfig{}, std::nullopt);
  for (const auto& d : data) EXPECT_EQ(model.predict_proba(d.observation).label, d.label) << d.observation.id();
}

TEST(BaselineModel, MeanDrivenLabelWeightsMeanFeatureMost) {
  std::vector<LabeledObservation> data;
  for (int i = 0; i < 60; ++i) {
    const bool pos = i % 3 == 0;
    std::map<std::string, TimeSeries> ch;
    ch.emplace("a", TimeSeries(test::noise(64, mix_seed(5, i), 1.0, pos ? 1.5 : -1.5), 1.0, "a"));
    ch.emplace("b", TimeSeries(test::noise(64, mix_seed(6, i), 1.0), 1.0, "b"));
    data.push_back({Observation::from_channels("m" + std::to_string(i), std::move(ch), 12.0, SmoothingConfig{}),
                    pos ? Label::Positive : Label::Negative});
  }
  const auto model = train_baseline(data, TrainingConfig{}, SmoothingConfig{});
  std::size_t best = 0;
  for (std::size_t i = 0; i < model.weights().size(); ++i) {
    const auto& name = model.feature_spec()[i].name;
    if (name.rfind("time_of_day", 0) == 0) continue;
    if (std::abs(model.weights()[i]) > std::abs(model.weights()[best])) best = i;
  }
  EXPECT_EQ(model.feature_spec()[best].name, "a.raw.mean");
}

TEST(BaselineModel, TrainingIsDeterministic) {
  const auto data = test::step_dataset({"a", "b"}, "a", 5, 10, 64, 3);
  const auto m1 = train_baseline(data, TrainingConfig{}, SmoothingConfig{});
  const auto m2 = train_baseline(data, TrainingConfig{}, SmoothingConfig{});
  EXPECT_EQ(m1.to_json(), m2.to_json());
}

TEST(BaselineModel, SerializationRoundTripIsLossless) {
  const auto m = small_model();
  const auto back = BaselineModel::from_json(m.to_json());
  EXPECT_EQ(back, m);
  EXPECT_EQ(back.to_json(), m.to_json());
  const auto obs = test::random_observation("o", {"a", "b"}, 64, 9);
  EXPECT_EQ(back.probability(obs), m.probability(obs));
}

TEST(BaselineModel, RejectsMalformedModelFiles) {
  EXPECT_THROW(BaselineModel::from_json("{"), ConfigError);
  EXPECT_THROW(BaselineModel::from_json(R"({"version":99})"), ConfigError);
  auto j = small_model().to_json();
  j.replace(j.find("\"weights\""), 9, "\"weightz\"");
  EXPECT_THROW(BaselineModel::from_json(j), ConfigError);
}

TEST(BaselineModel, ChannelMismatchRejected) {
  const auto m = small_model();
  EXPECT_THROW(m.probability(test::random_observation("o", {"a", "c"}, 64, 1)), DataQualityError);
}

TEST(BaselineModel, PredictDoesNotMutateObservation) {
  auto m = small_model();
  const auto obs = test::random_observation("o", {"a", "b"}, 64, 4);
  const auto before = observation_to_wire_json(obs);
  (void)m.predict_proba(obs);
  EXPECT_EQ(observation_to_wire_json(obs), before);
}

TEST(BaselineModel, InvariantToChannelInsertionOrder) {
  const auto m = small_model();
  const auto a = test::noise(64, 1);
  const auto b = test::noise(64, 2);
  std::map<std::string, TimeSeries> first;
  first.emplace("a", TimeSeries(a, 1.0, "a"));
  first.emplace("b", TimeSeries(b, 1.0, "b"));
  std::map<std::string, TimeSeries> second;
  second.emplace("b", TimeSeries(b, 1.0, "b"));
  second.emplace("a", TimeSeries(a, 1.0, "a"));
  const auto o1 = Observation::from_channels("o", first, 3.0, SmoothingConfig{});
  const auto o2 = Observation::from_channels("o", second, 3.0, SmoothingConfig{});
  EXPECT_EQ(m.probability(o1), m.probability(o2));
}

TEST(BaselineModel, ZeroWeightChannelIsIgnored) {
  const auto m = small_model();
  auto w = m.weights();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (m.feature_spec()[i].name.rfind("b.", 0) == 0) w[i] = 0.0;
  }
  const auto masked = m.with_weights(w, m.bias());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto o1 = test::random_observation("o", {"a", "b"}, 64, seed);
    auto o2 = o1;
    o2.replace_channel("b", test::noise(64, seed + 100, 30.0));
    o2.replace_roc("b", test::noise(64, seed + 200, 1.0, 5.0));
    EXPECT_EQ(masked.probability(o1), masked.probability(o2));
  }
}

TEST(Prediction, LabelFollowsThreshold) {
  EXPECT_EQ(Prediction::from_probability(0.5, 0.5).label, Label::Positive);
  EXPECT_EQ(Prediction::from_probability(0.4999, 0.5).label, Label::Negative);
  EXPECT_THROW(Prediction::from_probability(1.5, 0.5), Error);
}

TEST(PredictorId, KeysDisplayAndOrder) {
  EXPECT_EQ(PredictorId::roc("light").key(), "roc:light");
  EXPECT_EQ(PredictorId::parse("raw:noise"), PredictorId::raw("noise"));
  EXPECT_EQ(PredictorId::parse("time_of_day"), PredictorId::time_of_day());
  EXPECT_EQ(PredictorId::roc("light").display(), "light ROC");
  EXPECT_THROW(PredictorId::parse("level:x"), ConfigError);
  EXPECT_LT(PredictorId::raw("a"), PredictorId::roc("a"));
  EXPECT_LT(PredictorId::roc("a"), PredictorId::raw("b"));
  EXPECT_LT(PredictorId::roc("z"), PredictorId::time_of_day());
  const auto obs = test::random_observation("o", {"b", "a"}, 8, 1);
  const auto ps = predictors_of(obs);
  ASSERT_EQ(ps.size(), 5u);
  EXPECT_EQ(ps.front(), PredictorId::raw("a"));
  EXPECT_EQ(ps.back(), PredictorId::time_of_day());
}

TEST(Observation, StructureValidated) {
  EXPECT_THROW(Observation("o", {}, {}, 1.0), DataQualityError);
  EXPECT_THROW(Observation("o", {{"c", series({1, 2})}}, {{"c", series({1, 2})}}, 24.0), DataQualityError);
  EXPECT_THROW(Observation("o", {{"c", series({1, 2})}}, {{"d", series({1, 2})}}, 1.0), DataQualityError);
  EXPECT_THROW(Observation("o", {{"c", series({1, 2})}, {"d", series({1, 2, 3})}},
                           {{"c", series({1, 2})}, {"d", series({1, 2, 3})}}, 1.0),
               DataQualityError);
}

}  // namespace
}  // namespace actint
