#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "actint/actions.hpp"
#include "actint/behavior.hpp"
#include "actint/model.hpp"
#include "actint/ranking.hpp"
#include "actint/report.hpp"

namespace actint {

struct InterpretConfig {
  RankingConfig ranking;
  BehaviorConfig behavior;
  /// Skip observations the model classifies as negative.
  bool positives_only = true;
  std::string config_fingerprint;
  std::string tool_version;
};

/// Filter banks keyed by window length, built on first use. Thread-safe.
class FilterBankCache {
 public:
  const FilterBank& get(std::size_t n);

 private:
  std::mutex mutex_;
  std::map<std::size_t, std::unique_ptr<FilterBank>> banks_;
};

/// predict -> rank -> extract behavior -> recommend for one observation.
/// nullopt when positives_only is set and the prediction is negative.
std::optional<InterpretationReport> interpret(ModelAdapter& model, const Observation& obs,
                                              std::span<const ChannelStats> stats, const RuleSet& rules,
                                              const InterpretConfig& config, FilterBankCache& banks);

struct InterpretFailure {
  std::string observation_id;
  std::string message;
};

struct BatchResult {
  /// Sorted by observation id.
  std::vector<InterpretationReport> reports;
  std::vector<InterpretFailure> failures;
};

using ModelFactory = std::function<std::unique_ptr<ModelAdapter>()>;

/// Interprets every observation with `jobs` workers, each owning a model from
/// `factory`. A worker whose model fails with a TransportError opens a fresh
/// one for its next observation. Failed observations are recorded and skipped.
BatchResult interpret_batch(const ModelFactory& factory, std::span<const Observation> observations,
                            std::span<const ChannelStats> stats, const RuleSet& rules,
                            const InterpretConfig& config, int jobs = 1);

}  // namespace actint
