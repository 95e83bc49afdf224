#include "actint/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "actint/errors.hpp"

namespace actint {

std::string to_string(BehaviorLabel label) {
  switch (label) {
    case BehaviorLabel::AbnormallyLow: return "AbnormallyLow";
    case BehaviorLabel::AbnormallyHigh: return "AbnormallyHigh";
    case BehaviorLabel::NominalLevel: return "NominalLevel";
    case BehaviorLabel::Increasing: return "Increasing";
    case BehaviorLabel::Decreasing: return "Decreasing";
    case BehaviorLabel::SuddenChangeUp: return "SuddenChangeUp";
    case BehaviorLabel::SuddenChangeDown: return "SuddenChangeDown";
    case BehaviorLabel::NoDominantChange: return "NoDominantChange";
  }
  return "NoDominantChange";
}

BehaviorLabel behavior_from_string(const std::string& s) {
  for (auto label : {BehaviorLabel::AbnormallyLow, BehaviorLabel::AbnormallyHigh,
                     BehaviorLabel::NominalLevel, BehaviorLabel::Increasing, BehaviorLabel::Decreasing,
                     BehaviorLabel::SuddenChangeUp, BehaviorLabel::SuddenChangeDown,
                     BehaviorLabel::NoDominantChange}) {
    if (to_string(label) == s) return label;
  }
  throw ConfigError("unknown behavior label '" + s + "'");
}

bool is_stationary(BehaviorLabel label) {
  return label == BehaviorLabel::AbnormallyLow || label == BehaviorLabel::AbnormallyHigh ||
         label == BehaviorLabel::NominalLevel;
}

bool is_differencing(BehaviorLabel label) { return !is_stationary(label); }

BehaviorLabel mirror(BehaviorLabel label) {
  switch (label) {
    case BehaviorLabel::AbnormallyLow: return BehaviorLabel::AbnormallyHigh;
    case BehaviorLabel::AbnormallyHigh: return BehaviorLabel::AbnormallyLow;
    case BehaviorLabel::Increasing: return BehaviorLabel::Decreasing;
    case BehaviorLabel::Decreasing: return BehaviorLabel::Increasing;
    case BehaviorLabel::SuddenChangeUp: return BehaviorLabel::SuddenChangeDown;
    case BehaviorLabel::SuddenChangeDown: return BehaviorLabel::SuddenChangeUp;
    default: return label;
  }
}

namespace {

std::vector<double> znorm(std::vector<double> v) {
  const double m = mean_of(v);
  const double s = population_std(v);
  for (double& x : v) x = (x - m) / s;
  return v;
}

std::vector<double> negated(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = -v[i];
  return out;
}

double dot(const double* a, const double* b, std::size_t len) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < len; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}

std::vector<double> prefix(std::span<const double> v, bool squared) {
  std::vector<double> p(v.size() + 1, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) p[i + 1] = p[i] + (squared ? v[i] * v[i] : v[i]);
  return p;
}

}  // namespace

FilterBank::FilterBank(std::size_t n) : n_(n) {
  if (n < 4) throw ConfigError("filter bank length must be >= 4, got " + std::to_string(n));
  std::vector<double> ramp(n);
  std::vector<double> step(n);
  for (std::size_t i = 0; i < n; ++i) {
    ramp[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    step[i] = i < n / 2 ? 0.0 : 1.0;
  }
  increasing_ = znorm(std::move(ramp));
  decreasing_ = negated(increasing_);
  step_up_ = znorm(std::move(step));
  step_down_ = negated(step_up_);
}

std::span<const double> FilterBank::filter(BehaviorLabel label) const {
  switch (label) {
    case BehaviorLabel::Increasing: return increasing_;
    case BehaviorLabel::Decreasing: return decreasing_;
    case BehaviorLabel::SuddenChangeUp: return step_up_;
    case BehaviorLabel::SuddenChangeDown: return step_down_;
    default: break;
  }
  throw ConfigError("no template for behavior " + to_string(label));
}

FilterBank make_filter_bank(std::size_t n) { return FilterBank(n); }

LagProfile lag_profile(std::span<const double> xhat, std::span<const double> ghat,
                       double min_overlap_fraction) {
  if (xhat.size() != ghat.size()) throw DataQualityError("window and template lengths differ");
  const std::size_t n = xhat.size();
  const auto min_overlap = static_cast<std::size_t>(
      std::max(2.0, std::ceil(min_overlap_fraction * static_cast<double>(n))));
  const auto px = prefix(xhat, false);
  const auto pxx = prefix(xhat, true);
  const auto pg = prefix(ghat, false);
  const auto pgg = prefix(ghat, true);
  constexpr double kFlat = 1e-8;  // per-sample variance below this is a constant segment

  LagProfile out;
  out.xcorr.resize(2 * n - 1);
  out.similarity.assign(2 * n - 1, std::numeric_limits<double>::quiet_NaN());
  const auto nn = static_cast<long long>(n);
  for (long long lag = -(nn - 1); lag <= nn - 1; ++lag) {
    const std::size_t len = n - static_cast<std::size_t>(lag < 0 ? -lag : lag);
    const std::size_t xa = lag < 0 ? static_cast<std::size_t>(-lag) : 0;
    const std::size_t ga = lag < 0 ? 0 : static_cast<std::size_t>(lag);
    const double d = dot(xhat.data() + xa, ghat.data() + ga, len);
    const auto k = static_cast<std::size_t>(lag + nn - 1);
    out.xcorr[k] = d / static_cast<double>(n);
    if (len < min_overlap) continue;
    const double l = static_cast<double>(len);
    const double sx = px[xa + len] - px[xa];
    const double sg = pg[ga + len] - pg[ga];
    const double vx = (pxx[xa + len] - pxx[xa]) - sx * sx / l;
    const double vg = (pgg[ga + len] - pgg[ga]) - sg * sg / l;
    if (vx <= kFlat * l || vg <= kFlat * l) continue;
    out.similarity[k] = (d - sx * sg / l) / std::sqrt(vx * vg);
  }
  return out;
}

std::optional<std::vector<double>> xcorr_normalized(const TimeSeries& x, std::span<const double> g) {
  if (x.size() != g.size()) {
    throw DataQualityError("cross-correlation needs equal lengths, got " + std::to_string(x.size()) +
                           " and " + std::to_string(g.size()));
  }
  const auto xz = zscore_normalize(x);
  if (!xz) return std::nullopt;
  const auto gz = zscore_normalize(TimeSeries(std::vector<double>(g.begin(), g.end()), 1.0, "filter"));
  if (!gz) throw DataQualityError("cross-correlation template is constant");
  // min overlap 1.0 skips the similarity branch for every lag but 0.
  return lag_profile(xz->series.values(), gz->series.values(), 1.0).xcorr;
}

void DifferencingConfig::validate() const {
  if (!(min_similarity >= -1.0 && min_similarity <= 1.0)) {
    throw ConfigError("min_similarity must lie in [-1, 1]");
  }
  if (!(min_overlap_fraction > 0.0 && min_overlap_fraction <= 1.0)) {
    throw ConfigError("min_overlap_fraction must lie in (0, 1]");
  }
}

void StationaryConfig::validate() const {
  if (!(z_threshold > 0.0)) throw ConfigError("z_threshold must be positive");
}

namespace {

struct Peak {
  double value = -std::numeric_limits<double>::infinity();
  long long lag = 0;
};

// Visits lags by increasing |lag| (negative first) so that among equal values
// the lag closest to zero wins.
Peak peak_of(const std::vector<double>& values, bool negate, double min_gain) {
  const auto nn = static_cast<long long>((values.size() + 1) / 2);
  Peak best;
  for (long long a = 0; a < nn; ++a) {
    for (long long lag : {-a, a}) {
      if (a == 0 && lag != 0) continue;
      const double raw = values[static_cast<std::size_t>(lag + nn - 1)];
      if (std::isnan(raw)) continue;
      const double v = negate ? -raw : raw;
      if (v > best.value + min_gain) best = {v, lag};
      if (a == 0) break;
    }
  }
  return best;
}

}  // namespace

BehaviorEvidence classify_differencing(const TimeSeries& raw_channel, const FilterBank& bank,
                                       const DifferencingConfig& config) {
  config.validate();
  if (raw_channel.size() != bank.length()) {
    throw DataQualityError("window length " + std::to_string(raw_channel.size()) +
                           " does not match filter bank length " + std::to_string(bank.length()));
  }
  BehaviorEvidence ev;
  const auto xz = zscore_normalize(raw_channel);
  if (!xz) {
    ev.label = BehaviorLabel::NoDominantChange;
    ev.notes.emplace_back("degenerate window: the series is constant");
    return ev;
  }
  const auto x = xz->series.values();
  // Decreasing and SuddenChangeDown are exact negations of the other two
  // templates, so their profiles are the negated profiles.
  const LagProfile ramp = lag_profile(x, bank.filter(BehaviorLabel::Increasing), config.min_overlap_fraction);
  const LagProfile step =
      lag_profile(x, bank.filter(BehaviorLabel::SuddenChangeUp), config.min_overlap_fraction);

  constexpr double kTieTolerance = 1e-12;
  BehaviorLabel winner = BehaviorLabel::NoDominantChange;
  double winner_value = -std::numeric_limits<double>::infinity();
  long long winner_lag = 0;
  for (BehaviorLabel label : kTemplateLabels) {
    const bool use_ramp = label == BehaviorLabel::Increasing || label == BehaviorLabel::Decreasing;
    const bool negate = label == BehaviorLabel::Decreasing || label == BehaviorLabel::SuddenChangeDown;
    const LagProfile& profile = use_ramp ? ramp : step;
    const Peak sim = peak_of(profile.similarity, negate, kTieTolerance);
    const Peak xc = peak_of(profile.xcorr, negate, 0.0);
    ev.similarity_scores[label] = sim.value;
    ev.xcorr_peaks[label] = xc.value;
    if (sim.value > winner_value + kTieTolerance) {
      winner = label;
      winner_value = sim.value;
      winner_lag = sim.lag;
    }
  }
  ev.best_lag = static_cast<int>(winner_lag);
  if (winner_value < config.min_similarity) {
    ev.label = BehaviorLabel::NoDominantChange;
    ev.notes.emplace_back(kNoDominantChangeNote);
  } else {
    ev.label = winner;
  }
  return ev;
}

BehaviorEvidence classify_stationary(const TimeSeries& raw_channel, const ChannelStats& stats,
                                     const StationaryConfig& config) {
  config.validate();
  BehaviorEvidence ev;
  const double m = mean_of(raw_channel.values());
  ev.window_mean = m;
  if (!(stats.std_dev > 0.0)) {
    ev.label = BehaviorLabel::NominalLevel;
    ev.notes.push_back("degenerate training statistics for '" + stats.channel_name +
                       "' (std 0); level cannot be judged");
    return ev;
  }
  const double z = (m - stats.mean) / stats.std_dev;
  ev.z_score = z;
  if (z >= config.z_threshold) {
    ev.label = BehaviorLabel::AbnormallyHigh;
  } else if (z <= -config.z_threshold) {
    ev.label = BehaviorLabel::AbnormallyLow;
  } else {
    ev.label = BehaviorLabel::NominalLevel;
  }
  return ev;
}

ActionableItem extract_actionable_item(const Observation& obs, const ImportanceRanking& ranking,
                                       std::span<const ChannelStats> stats, const FilterBank& bank,
                                       const BehaviorConfig& config) {
  const PredictorId top = top_predictor(ranking);
  switch (top.kind) {
    case PredictorId::Kind::Raw: {
      const auto it = std::find_if(stats.begin(), stats.end(),
                                   [&](const ChannelStats& s) { return s.channel_name == top.channel; });
      if (it == stats.end()) {
        throw ConfigError("no training statistics for channel '" + top.channel + "'");
      }
      return {top, classify_stationary(obs.channel(top.channel), *it, config.stationary)};
    }
    case PredictorId::Kind::Roc:
      return {top, classify_differencing(obs.channel(top.channel), bank, config.differencing)};
    case PredictorId::Kind::TimeOfDay:
      break;
  }
  BehaviorEvidence ev;
  ev.label = BehaviorLabel::NominalLevel;
  ev.notes.emplace_back(kTimeDrivenNote);
  return {top, ev};
}

}  // namespace actint
