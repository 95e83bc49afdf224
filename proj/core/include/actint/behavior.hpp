#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "actint/observation.hpp"
#include "actint/ranking.hpp"

namespace actint {

enum class BehaviorLabel {
  AbnormallyLow,
  AbnormallyHigh,
  NominalLevel,
  Increasing,
  Decreasing,
  SuddenChangeUp,
  SuddenChangeDown,
  NoDominantChange,
};

std::string to_string(BehaviorLabel label);
BehaviorLabel behavior_from_string(const std::string& s);
bool is_stationary(BehaviorLabel label);
bool is_differencing(BehaviorLabel label);
/// The label of the negated signal: Low <-> High, Increasing <-> Decreasing,
/// SuddenChangeUp <-> SuddenChangeDown, others unchanged.
BehaviorLabel mirror(BehaviorLabel label);

/// The four differencing templates, in this order.
inline constexpr BehaviorLabel kTemplateLabels[] = {
    BehaviorLabel::Increasing, BehaviorLabel::Decreasing, BehaviorLabel::SuddenChangeUp,
    BehaviorLabel::SuddenChangeDown};

/// Z-normalized templates sized to the window: ramp up, ramp down, step up,
/// step down. Steps switch at floor(n/2). Built once per window length and
/// shared read-only.
class FilterBank {
 public:
  explicit FilterBank(std::size_t n);

  std::size_t length() const noexcept { return n_; }
  /// Template for Increasing, Decreasing, SuddenChangeUp or SuddenChangeDown.
  std::span<const double> filter(BehaviorLabel label) const;

 private:
  std::size_t n_;
  std::vector<double> increasing_;
  std::vector<double> decreasing_;
  std::vector<double> step_up_;
  std::vector<double> step_down_;
};

/// Throws ConfigError for n < 4.
FilterBank make_filter_bank(std::size_t n);

/// Zero-padded full normalized cross-correlation. Element k holds lag
/// i = k - (n - 1) and equals (1/n) * sum_m xhat[m - i] * ghat[m], where xhat
/// and ghat are population z-scores. Length 2n - 1; lag 0 of a signal with
/// itself is 1. nullopt when x is degenerate.
std::optional<std::vector<double>> xcorr_normalized(const TimeSeries& x, std::span<const double> g);

/// Per-lag similarity between a window and a template.
struct LagProfile {
  /// xcorr_normalized output (index k is lag k - (n - 1)).
  std::vector<double> xcorr;
  /// Pearson correlation of the overlapping segments at each lag; NaN where
  /// the overlap is shorter than the minimum or either segment is constant.
  /// At lag 0 this equals xcorr.
  std::vector<double> similarity;
};

/// Both profiles from one pass over the lags. `xhat` and `ghat` must already
/// be z-normalized and of equal length.
LagProfile lag_profile(std::span<const double> xhat, std::span<const double> ghat,
                       double min_overlap_fraction);

struct DifferencingConfig {
  /// Below this the winner is reported as NoDominantChange.
  double min_similarity = 0.35;
  /// Lags whose overlap is shorter than this fraction of the window are ignored.
  double min_overlap_fraction = 0.5;

  void validate() const;
};

struct StationaryConfig {
  double z_threshold = 2.0;

  void validate() const;
};

struct BehaviorEvidence {
  BehaviorLabel label = BehaviorLabel::NoDominantChange;
  /// Differencing path: best overlap correlation per template.
  std::map<BehaviorLabel, double> similarity_scores;
  /// Differencing path: peak of the zero-padded cross-correlation per template.
  std::map<BehaviorLabel, double> xcorr_peaks;
  std::optional<int> best_lag;
  /// Stationary path.
  std::optional<double> z_score;
  std::optional<double> window_mean;
  std::vector<std::string> notes;

  bool operator==(const BehaviorEvidence&) const = default;
};

/// Correlate the raw window with each template and pick the template with the
/// highest similarity.
BehaviorEvidence classify_differencing(const TimeSeries& raw_channel, const FilterBank& bank,
                                       const DifferencingConfig& config = {});

/// Compare the window mean with training statistics.
BehaviorEvidence classify_stationary(const TimeSeries& raw_channel, const ChannelStats& stats,
                                     const StationaryConfig& config = {});

struct BehaviorConfig {
  DifferencingConfig differencing;
  StationaryConfig stationary;
};

struct ActionableItem {
  PredictorId predictor;
  BehaviorEvidence evidence;
};

inline constexpr const char* kTimeDrivenNote = "time-driven prediction: time of day is the top predictor";
inline constexpr const char* kNoDominantChangeNote =
    "no template reached the minimum similarity (reject option beyond the four templates)";

/// Route the top predictor to the stationary (Raw), differencing (Roc) or
/// time-of-day branch.
ActionableItem extract_actionable_item(const Observation& obs, const ImportanceRanking& ranking,
                                       std::span<const ChannelStats> stats, const FilterBank& bank,
                                       const BehaviorConfig& config = {});

}  // namespace actint
