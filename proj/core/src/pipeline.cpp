#include "actint/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "actint/errors.hpp"

namespace actint {

const FilterBank& FilterBankCache::get(std::size_t n) {
  std::lock_guard lock(mutex_);
  auto& slot = banks_[n];
  if (!slot) slot = std::make_unique<FilterBank>(n);
  return *slot;
}

std::optional<InterpretationReport> interpret(ModelAdapter& model, const Observation& obs,
                                              std::span<const ChannelStats> stats, const RuleSet& rules,
                                              const InterpretConfig& config, FilterBankCache& banks) {
  const Prediction prediction = model.predict_proba(obs);
  if (config.positives_only && prediction.label != Label::Positive) return std::nullopt;

  InterpretationReport r;
  r.observation_id = obs.id();
  r.prediction = prediction;
  r.ranking = permutation_importance(model, obs, config.ranking);
  const ActionableItem item =
      extract_actionable_item(obs, r.ranking, stats, banks.get(obs.window_length()), config.behavior);
  r.top_predictor = item.predictor;
  r.evidence = item.evidence;
  if (prediction.label == Label::Positive) r.suggestions = recommend(item.predictor, item.evidence, rules);
  r.config_fingerprint = config.config_fingerprint;
  r.tool_version = config.tool_version;
  return r;
}

BatchResult interpret_batch(const ModelFactory& factory, std::span<const Observation> observations,
                            std::span<const ChannelStats> stats, const RuleSet& rules,
                            const InterpretConfig& config, int jobs) {
  FilterBankCache banks;
  const std::size_t n = observations.size();
  std::vector<std::optional<InterpretationReport>> slots(n);
  std::vector<std::optional<std::string>> errors(n);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    std::unique_ptr<ModelAdapter> model;
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        if (!model) model = factory();
        slots[i] = interpret(*model, observations[i], stats, rules, config, banks);
      } catch (const TransportError& e) {
        errors[i] = e.what();
        model.reset();
      } catch (const Error& e) {
        errors[i] = e.what();
      }
    }
  };

  const int workers = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  BatchResult out;
  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i]) out.reports.push_back(std::move(*slots[i]));
    if (errors[i]) out.failures.push_back({observations[i].id(), *errors[i]});
  }
  std::stable_sort(out.reports.begin(), out.reports.end(),
                   [](const auto& a, const auto& b) { return a.observation_id < b.observation_id; });
  std::stable_sort(out.failures.begin(), out.failures.end(),
                   [](const auto& a, const auto& b) { return a.observation_id < b.observation_id; });
  return out;
}

}  // namespace actint
