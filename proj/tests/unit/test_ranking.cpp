#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "actint/errors.hpp"
#include "actint/features.hpp"
#include "actint/ranking.hpp"
#include "support.hpp"

namespace actint {
namespace {

// Analytic models with known dependence structure.
class FunctionModel final : public ModelAdapter {
 public:
  explicit FunctionModel(std::function<double(const Observation&)> f) : f_(std::move(f)) {}
  Prediction predict_proba(const Observation& obs) override {
    ++calls;
    return Prediction::from_probability(f_(obs), 0.5);
  }
  std::string name() const override { return "function"; }
  double decision_threshold() const override { return 0.5; }
  int calls = 0;

 private:
  std::function<double(const Observation&)> f_;
};

double order_free_mean(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  double sum = 0.0;
  for (double x : s) sum += x;
  return sum / static_cast<double>(s.size());
}

Observation planted_step(const std::string& signal, std::uint64_t seed) {
  std::map<std::string, TimeSeries> ch;
  std::uint64_t k = 0;
  for (const auto& name : {"humidity", "light", "noise"}) {
    auto v = test::noise(600, mix_seed(seed, k++), 0.5, 10.0);
    if (name == signal) {
      for (std::size_t t = 300; t < v.size(); ++t) v[t] += 20.0;
    }
    ch.emplace(name, TimeSeries(std::move(v), 1.0, name));
  }
  return Observation::from_channels("step-" + std::to_string(seed), std::move(ch), 9.0, SmoothingConfig{});
}

TEST(Disarrange, ShuffledSeriesKeepsItsMultiset) {
  const auto obs = test::random_observation("o", {"a", "b"}, 100, 1);
  Rng rng(4);
  for (const auto& p : {PredictorId::raw("a"), PredictorId::roc("b")}) {
    const auto d = disarrange(obs, p, rng);
    const auto& before = p.kind == PredictorId::Kind::Raw ? obs.channel(p.channel) : obs.roc(p.channel);
    const auto& after = p.kind == PredictorId::Kind::Raw ? d.channel(p.channel) : d.roc(p.channel);
    std::vector<double> x(before.values().begin(), before.values().end());
    std::vector<double> y(after.values().begin(), after.values().end());
    EXPECT_NE(x, y);
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    EXPECT_EQ(x, y);
  }
}

TEST(Disarrange, OnlyTheTargetPredictorChanges) {
  const auto obs = test::random_observation("o", {"a", "b"}, 100, 1, 5.0);
  Rng rng(8);
  const auto d = disarrange(obs, PredictorId::raw("a"), rng);
  EXPECT_EQ(d.roc("a"), obs.roc("a"));  // Raw and Roc are separate inputs
  EXPECT_EQ(d.channel("b"), obs.channel("b"));
  EXPECT_EQ(d.roc("b"), obs.roc("b"));
  EXPECT_EQ(d.time_of_day(), obs.time_of_day());

  const auto t = disarrange(obs, PredictorId::time_of_day(), rng);
  EXPECT_GE(t.time_of_day(), 0.0);
  EXPECT_LT(t.time_of_day(), 24.0);
  EXPECT_EQ(t.channels(), obs.channels());
  EXPECT_EQ(t.channel_roc(), obs.channel_roc());
}

TEST(Disarrange, FixedSeedRepeats) {
  const auto obs = test::random_observation("o", {"a"}, 100, 1);
  Rng r1(42);
  Rng r2(42);
  EXPECT_EQ(disarrange(obs, PredictorId::roc("a"), r1), disarrange(obs, PredictorId::roc("a"), r2));
}

TEST(Disarrange, SingleSampleIsUnchanged) {
  std::vector<double> one = {3.5};
  Rng rng(1);
  shuffle_samples(one, rng);
  EXPECT_EQ(one, std::vector<double>{3.5});
}

TEST(Disarrange, UnknownPredictorRejected) {
  const auto obs = test::random_observation("o", {"a"}, 10, 1);
  Rng rng(1);
  EXPECT_THROW(disarrange(obs, PredictorId::raw("zz"), rng), Error);
}

TEST(PermutationImportance, CoversEveryPredictorAndCallsModelOncePerShuffle) {
  FunctionModel m([](const Observation& o) { return 1.0 / (1.0 + std::exp(-o.channel("a")[0] / 10.0)); });
  const auto obs = test::random_observation("o", {"a", "b", "c"}, 50, 2);
  const auto r = permutation_importance(m, obs, RankingConfig{8, 3, ScoreMode::Signed});
  EXPECT_EQ(r.scores.size(), 7u);
  EXPECT_EQ(m.calls, 1 + 7 * 8);
  auto top = r.top;
  std::sort(top.begin(), top.end());
  EXPECT_EQ(top, predictors_of(obs));
  EXPECT_EQ(r.repeats, 8);
  EXPECT_EQ(r.seed, 3u);
}

TEST(PermutationImportance, ScoreIsOriginalMinusMeanOfShuffles) {
  FunctionModel m([](const Observation& o) { return 1.0 / (1.0 + std::exp(-(o.roc("a")[3] - 0.5))); });
  const auto obs = test::random_observation("o", {"a"}, 40, 5);
  const RankingConfig cfg{5, 77, ScoreMode::Signed};
  const auto r = permutation_importance(m, obs, cfg);
  const auto p = PredictorId::roc("a");
  double sum = 0.0;
  for (int k = 0; k < cfg.repeats; ++k) {
    Rng rng(disarrange_seed(cfg.seed, p, k));
    sum += m.predict_proba(disarrange(obs, p, rng)).probability;
  }
  EXPECT_NEAR(r.score_of(p), r.original_probability - sum / cfg.repeats, 1e-15);

  const auto abs_r = permutation_importance(m, obs, RankingConfig{5, 77, ScoreMode::Absolute});
  EXPECT_EQ(abs_r.score_of(p), std::fabs(r.score_of(p)));
}

TEST(PermutationImportance, IgnoredPredictorScoresExactlyZero) {
  FunctionModel m([](const Observation& o) { return 1.0 / (1.0 + std::exp(-mean_of(o.roc("a").values()))); });
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto obs = test::random_observation("o", {"a", "b"}, 80, seed);
    const auto r = permutation_importance(m, obs, RankingConfig{8, seed, ScoreMode::Signed});
    EXPECT_EQ(r.score_of(PredictorId::raw("b")), 0.0);
    EXPECT_EQ(r.score_of(PredictorId::roc("b")), 0.0);
    EXPECT_EQ(r.score_of(PredictorId::raw("a")), 0.0);
    EXPECT_EQ(r.score_of(PredictorId::time_of_day()), 0.0);
  }
}

// Permutation preserves the multiset, so a model that only reads a raw mean
// cannot be explained by shuffling.
TEST(PermutationImportance, MeanOnlyModelIsABlindSpot) {
  FunctionModel m([](const Observation& o) {
    return 1.0 / (1.0 + std::exp(-(order_free_mean(o.channel("a").values()) - 10.0)));
  });
  const auto obs = test::random_observation("o", {"a", "b"}, 80, 1);
  const auto r = permutation_importance(m, obs, RankingConfig{});
  EXPECT_EQ(r.score_of(PredictorId::raw("a")), 0.0);
}

TEST(PermutationImportance, RocPeakModelSelectsSignalRoc) {
  FunctionModel m([](const Observation& o) {
    return 1.0 / (1.0 + std::exp(-4.0 * (peak_moving_average(o.roc("light").values(), 30) - 0.5)));
  });
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto obs = planted_step("light", seed);
    const auto r = permutation_importance(m, obs, RankingConfig{8, seed, ScoreMode::Signed});
    const double signal = r.score_of(PredictorId::roc("light"));
    for (const auto& s : r.scores) {
      if (s.predictor != PredictorId::roc("light")) EXPECT_LT(s.score, signal) << s.predictor.key();
    }
    EXPECT_EQ(top_predictor(r), PredictorId::roc("light"));
  }
}

TEST(PermutationImportance, ScoresAreBoundedAndDeterministic) {
  const auto data = test::step_dataset({"a", "b"}, "a", 6, 6, 64, 2);
  auto model = train_baseline(data, TrainingConfig{}, SmoothingConfig{});
  for (const auto& d : data) {
    const auto r1 = permutation_importance(model, d.observation, RankingConfig{4, 9, ScoreMode::Signed});
    const auto r2 = permutation_importance(model, d.observation, RankingConfig{4, 9, ScoreMode::Signed});
    EXPECT_EQ(r1, r2);
    for (const auto& s : r1.scores) {
      EXPECT_GE(s.score, -1.0);
      EXPECT_LE(s.score, 1.0);
    }
  }
}

TEST(PermutationImportance, EvaluationOrderIndependent) {
  const auto data = test::step_dataset({"a", "b"}, "a", 3, 3, 64, 5);
  auto model = train_baseline(data, TrainingConfig{}, SmoothingConfig{});
  const auto& obs = data.front().observation;
  const RankingConfig cfg{6, 21, ScoreMode::Signed};
  const auto r = permutation_importance(model, obs, cfg);
  auto preds = predictors_of(obs);
  std::reverse(preds.begin(), preds.end());
  for (const auto& p : preds) {
    EXPECT_EQ(predictor_score(model, obs, p, r.original_probability, cfg), r.score_of(p)) << p.key();
  }
}

TEST(PermutationImportance, ZeroWeightBaselineChannelScoresZero) {
  const auto data = test::step_dataset({"a", "b"}, "a", 6, 6, 64, 8);
  const auto trained = train_baseline(data, TrainingConfig{}, SmoothingConfig{});
  auto w = trained.weights();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (trained.feature_spec()[i].name.rfind("b.", 0) == 0) w[i] = 0.0;
  }
  auto masked = trained.with_weights(w, trained.bias());
  for (const auto& d : data) {
    const auto r = permutation_importance(masked, d.observation, RankingConfig{});
    EXPECT_EQ(r.score_of(PredictorId::raw("b")), 0.0);
    EXPECT_EQ(r.score_of(PredictorId::roc("b")), 0.0);
  }
}

TEST(TopPredictor, TieBreaks) {
  std::vector<PredictorScore> s = {{PredictorId::raw("a"), 0.3}, {PredictorId::roc("a"), 0.1}};
  EXPECT_EQ(order_by_score(s).front(), PredictorId::raw("a"));

  s = {{PredictorId::raw("b"), 0.2}, {PredictorId::roc("a"), 0.2}};
  EXPECT_EQ(order_by_score(s).front(), PredictorId::roc("a"));

  s = {{PredictorId::time_of_day(), 0.2}, {PredictorId::roc("z"), 0.2}, {PredictorId::raw("z"), 0.2}};
  const auto o = order_by_score(s);
  EXPECT_EQ(o[0], PredictorId::raw("z"));
  EXPECT_EQ(o[1], PredictorId::roc("z"));
  EXPECT_EQ(o[2], PredictorId::time_of_day());

  s = {{PredictorId::raw("light"), 0.01}, {PredictorId::roc("light"), 0.4}, {PredictorId::roc("noise"), 0.1}};
  ImportanceRanking r;
  r.scores = s;
  r.top = order_by_score(s);
  EXPECT_EQ(top_predictor(r), PredictorId::roc("light"));

  EXPECT_THROW(top_predictor(ImportanceRanking{}), ConfigError);
}

TEST(RankingConfig, Validation) {
  EXPECT_THROW((RankingConfig{0, 0, ScoreMode::Signed}.validate()), ConfigError);
  EXPECT_EQ(score_mode_from_string("absolute"), ScoreMode::Absolute);
  EXPECT_THROW(score_mode_from_string("abs"), ConfigError);
}

}  // namespace
}  // namespace actint
