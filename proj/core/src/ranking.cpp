#include "actint/ranking.hpp"

#include <algorithm>
#include <cmath>

#include "actint/errors.hpp"

namespace actint {

void RankingConfig::validate() const {
  if (repeats < 1) throw ConfigError("ranking repeats must be >= 1");
}

double ImportanceRanking::score_of(const PredictorId& p) const {
  for (const auto& s : scores) {
    if (s.predictor == p) return s.score;
  }
  throw ConfigError("ranking has no score for predictor " + p.key());
}

void shuffle_samples(std::span<double> samples, Rng& rng) { rng.shuffle(samples); }

Observation disarrange(const Observation& obs, const PredictorId& p, Rng& rng) {
  Observation copy = obs;
  switch (p.kind) {
    case PredictorId::Kind::Raw: {
      const auto v = obs.channel(p.channel).values();
      std::vector<double> shuffled(v.begin(), v.end());
      shuffle_samples(shuffled, rng);
      copy.replace_channel(p.channel, std::move(shuffled));
      break;
    }
    case PredictorId::Kind::Roc: {
      const auto v = obs.roc(p.channel).values();
      std::vector<double> shuffled(v.begin(), v.end());
      shuffle_samples(shuffled, rng);
      copy.replace_roc(p.channel, std::move(shuffled));
      break;
    }
    case PredictorId::Kind::TimeOfDay:
      copy.set_time_of_day(rng.uniform(0.0, 24.0));
      break;
  }
  return copy;
}

std::uint64_t disarrange_seed(std::uint64_t seed, const PredictorId& p, int k) {
  return mix_seed(mix_seed(seed, fnv1a64(p.key())), static_cast<std::uint64_t>(k));
}

double predictor_score(ModelAdapter& model, const Observation& obs, const PredictorId& p,
                       double original_probability, const RankingConfig& config) {
  // Summing differences keeps an ignored predictor at exactly zero.
  double sum = 0.0;
  for (int k = 0; k < config.repeats; ++k) {
    Rng rng(disarrange_seed(config.seed, p, k));
    sum += original_probability - model.predict_proba(disarrange(obs, p, rng)).probability;
  }
  const double diff = sum / static_cast<double>(config.repeats);
  return config.mode == ScoreMode::Absolute ? std::fabs(diff) : diff;
}

std::vector<PredictorId> order_by_score(std::span<const PredictorScore> scores) {
  std::vector<PredictorScore> sorted(scores.begin(), scores.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const PredictorScore& a, const PredictorScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.predictor < b.predictor;
  });
  std::vector<PredictorId> out;
  out.reserve(sorted.size());
  for (auto& s : sorted) out.push_back(std::move(s.predictor));
  return out;
}

ImportanceRanking permutation_importance(ModelAdapter& model, const Observation& obs,
                                         const RankingConfig& config) {
  config.validate();
  ImportanceRanking r;
  r.observation_id = obs.id();
  r.repeats = config.repeats;
  r.seed = config.seed;
  r.mode = config.mode;
  r.original_probability = model.predict_proba(obs).probability;
  for (const auto& p : predictors_of(obs)) {
    r.scores.push_back({p, predictor_score(model, obs, p, r.original_probability, config)});
  }
  r.top = order_by_score(r.scores);
  return r;
}

PredictorId top_predictor(const ImportanceRanking& ranking) {
  if (ranking.top.empty()) throw ConfigError("cannot take the top of an empty ranking");
  return ranking.top.front();
}

std::string to_string(ScoreMode mode) { return mode == ScoreMode::Absolute ? "absolute" : "signed"; }

ScoreMode score_mode_from_string(const std::string& s) {
  if (s == "signed") return ScoreMode::Signed;
  if (s == "absolute") return ScoreMode::Absolute;
  throw ConfigError("unknown score mode '" + s + "'");
}

}  // namespace actint
