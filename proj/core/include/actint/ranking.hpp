#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "actint/model.hpp"
#include "actint/rng.hpp"

namespace actint {

enum class ScoreMode {
  Signed,    ///< original probability minus mean disarranged probability
  Absolute,  ///< magnitude of that difference
};

struct RankingConfig {
  int repeats = 8;
  std::uint64_t seed = 0;
  ScoreMode mode = ScoreMode::Signed;

  void validate() const;
};

struct PredictorScore {
  PredictorId predictor;
  double score = 0.0;

  bool operator==(const PredictorScore&) const = default;
};

inline constexpr const char* kTieBreakRule =
    "score descending, then channel name ascending, then raw < roc < time_of_day";

/// Per-observation importance of every predictor.
struct ImportanceRanking {
  std::string observation_id;
  double original_probability = 0.0;
  /// One entry per predictor, in canonical predictor order.
  std::vector<PredictorScore> scores;
  int repeats = 0;
  std::uint64_t seed = 0;
  ScoreMode mode = ScoreMode::Signed;
  /// Predictors sorted by kTieBreakRule.
  std::vector<PredictorId> top;

  double score_of(const PredictorId& p) const;
  bool operator==(const ImportanceRanking&) const = default;
};

/// Shuffle samples in place with Fisher-Yates.
void shuffle_samples(std::span<double> samples, Rng& rng);

/// Copy of `obs` in which only predictor `p` is altered: a Raw or Roc series
/// becomes a random permutation of its own samples (the other variant is left
/// alone), TimeOfDay is redrawn uniformly from [0, 24).
Observation disarrange(const Observation& obs, const PredictorId& p, Rng& rng);

/// Seed of the shuffle stream for predictor `p`, repeat `k`. Depends only on
/// (seed, p, k) so scores do not depend on evaluation order.
std::uint64_t disarrange_seed(std::uint64_t seed, const PredictorId& p, int k);

/// Score of one predictor: original minus the mean probability over `repeats`
/// disarranged copies (absolute value in ScoreMode::Absolute).
double predictor_score(ModelAdapter& model, const Observation& obs, const PredictorId& p,
                       double original_probability, const RankingConfig& config);

ImportanceRanking permutation_importance(ModelAdapter& model, const Observation& obs,
                                         const RankingConfig& config);

/// Sort predictors by kTieBreakRule.
std::vector<PredictorId> order_by_score(std::span<const PredictorScore> scores);

/// ranking.top[0]. Throws if the ranking is empty.
PredictorId top_predictor(const ImportanceRanking& ranking);

std::string to_string(ScoreMode mode);
ScoreMode score_mode_from_string(const std::string& s);

}  // namespace actint
