#include <benchmark/benchmark.h>

#include <map>
#include <string>
#include <vector>

#include "actint/behavior.hpp"
#include "actint/model.hpp"
#include "actint/pipeline.hpp"
#include "actint/ranking.hpp"
#include "actint/rng.hpp"
#include "actint/time_series.hpp"

namespace {

using namespace actint;

const std::vector<std::string> kChannels = {"light", "temperature", "humidity", "pressure", "noise"};

std::vector<double> noise(std::size_t n, std::uint64_t seed, double offset = 0.0) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = offset + rng.normal();
  return v;
}

Observation observation(const std::string& id, std::size_t n, std::uint64_t seed, double step) {
  std::map<std::string, TimeSeries> ch;
  std::uint64_t k = 0;
  for (const auto& name : kChannels) {
    auto v = noise(n, mix_seed(seed, k++), 10.0);
    if (name == "light") {
      for (std::size_t t = n / 2; t < n; ++t) v[t] += step;
    }
    ch.emplace(name, TimeSeries(std::move(v), 1.0, name));
  }
  return Observation::from_channels(id, std::move(ch), 12.0, SmoothingConfig{});
}

BaselineModel trained(std::size_t n) {
  std::vector<LabeledObservation> data;
  for (int i = 0; i < 40; ++i) {
    const bool pos = i < 10;
    data.push_back({observation("o" + std::to_string(i), n, i, pos ? 8.0 : 0.0),
                    pos ? Label::Positive : Label::Negative});
  }
  return train_baseline(data, TrainingConfig{}, SmoothingConfig{});
}

void BM_GaussianSmooth(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const TimeSeries x(noise(n, 1), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_smooth(x, SmoothingConfig{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GaussianSmooth)->Arg(600)->Arg(3600)->Arg(36000);

void BM_XcorrNormalized(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const FilterBank bank(n);
  const TimeSeries x(noise(n, 2), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(xcorr_normalized(x, bank.filter(BehaviorLabel::SuddenChangeUp)));
}
BENCHMARK(BM_XcorrNormalized)->Arg(256)->Arg(3600);

void BM_ClassifyDifferencing(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const FilterBank bank(n);
  auto v = noise(n, 3);
  for (std::size_t t = n / 3; t < n; ++t) v[t] += 5.0;
  const TimeSeries x(std::move(v), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(classify_differencing(x, bank));
}
BENCHMARK(BM_ClassifyDifferencing)->Arg(3600);

void BM_FilterBank(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(FilterBank(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_FilterBank)->Arg(3600);

void BM_PredictProba(benchmark::State& state) {
  auto model = trained(3600);
  const auto obs = observation("x", 3600, 99, 8.0);
  for (auto _ : state) benchmark::DoNotOptimize(model.predict_proba(obs));
}
BENCHMARK(BM_PredictProba);

void BM_PermutationImportance(benchmark::State& state) {
  auto model = trained(3600);
  const auto obs = observation("x", 3600, 99, 8.0);
  const RankingConfig cfg{static_cast<int>(state.range(0)), 1};
  for (auto _ : state) benchmark::DoNotOptimize(permutation_importance(model, obs, cfg));
}
BENCHMARK(BM_PermutationImportance)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_InterpretOne(benchmark::State& state) {
  auto model = trained(3600);
  const auto obs = observation("x", 3600, 99, 8.0);
  InterpretConfig cfg;
  cfg.positives_only = false;
  FilterBankCache banks;
  for (auto _ : state) {
    benchmark::DoNotOptimize(interpret(model, obs, model.training_stats(), default_rules(), cfg, banks));
  }
}
BENCHMARK(BM_InterpretOne)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
